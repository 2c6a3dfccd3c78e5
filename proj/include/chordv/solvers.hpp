#pragma once

#include "chordv/hankel.hpp"
#include "chordv/signal_model.hpp"
#include "chordv/vandermonde.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace chordv {

/// Which map plays R* in the x-update. Sum is the exact adjoint of
/// hankelize (R*R = diag(w)); Average is the anti-diagonal mean
/// (R*R = I).
enum class AdjointMode { Sum, Average };

/// Singular value threshold of the X-update: 1/beta, or gamma/beta.
enum class ThresholdMode { InverseBeta, GammaOverBeta };

/// Initial scaled dual D_0: all ones or all zeros.
enum class DualInit { Ones, Zero };

/// Hyperparameters of the Vandermonde-constrained ADMM. The data-dependent
/// weights (lambda, mu, gamma) and r_hat carry no defaults here; take them
/// from default_solver_settings() or an experiment config.
struct ChordVConfig {
    double lambda = 0.0;
    double gamma = 0.0;
    double mu = 0.0;
    double beta = 1.0;
    double tau = 1.0;
    double eta = 1e-3;
    int max_iter = 200;
    Eigen::Index r_hat = 0;

    AdjointMode adjoint = AdjointMode::Sum;
    ThresholdMode threshold = ThresholdMode::InverseBeta;
    DualInit dual_init = DualInit::Ones;
    /// Replace x by Z c after the amplitude update.
    bool overwrite_with_model = true;
    bool clamp_poles = false;
    /// Record the x-subproblem gradient norm after every x-update.
    bool check_stationarity = false;

    void validate(Eigen::Index signal_length) const;
};

/// The nuclear-norm ADMM without the Vandermonde terms.
struct ChordConfig {
    double lambda = 0.0;
    double beta = 1.0;
    double tau = 1.0;
    double eta = 1e-3;
    int max_iter = 200;
    AdjointMode adjoint = AdjointMode::Sum;
    DualInit dual_init = DualInit::Ones;

    void validate() const;
};

struct CadzowConfig {
    Eigen::Index r_hat = 0;
    int max_iter = 100;
    double eta = 1e-3;
};

struct RqrdConfig {
    Eigen::Index r_hat = 0;
    std::uint64_t seed = 0;
};

struct SolverResult {
    Fid denoised;
    std::vector<double> delta_trace;
    int iterations = 0;
    bool converged = false;
    std::optional<PoleSet> poles;              // sorted by descending |amplitude|
    std::optional<AmplitudeVector> amplitudes; // aligned with poles
    /// Relative x-subproblem gradient norms, one per iteration, when
    /// ChordVConfig::check_stationarity is set.
    std::vector<double> stationarity;
};

/// Snapshot handed to an observer after each completed iteration
/// (iteration >= 1).
struct IterationView {
    int iteration;
    const ComplexVector& x;
    double delta_x;
};
using IterationObserver = std::function<void(const IterationView&)>;

/// ||x_new - x_old|| / ||x_new||; 0 when both vanish, 1 when only x_new does.
double relative_change(const ComplexVector& x_new, const ComplexVector& x_old);

SolverResult chord_v(const Fid& y, const ChordVConfig& cfg, const IterationObserver& observer = {});
SolverResult chord(const Fid& y, const ChordConfig& cfg, const IterationObserver& observer = {});
SolverResult cadzow(const Fid& y, const CadzowConfig& cfg);
SolverResult rqrd(const Fid& y, const RqrdConfig& cfg);
SolverResult tsvd_denoise(const Fid& y, Eigen::Index r_hat);

std::string_view to_string(AdjointMode mode) noexcept;
std::string_view to_string(ThresholdMode mode) noexcept;
std::string_view to_string(DualInit init) noexcept;

} // namespace chordv
