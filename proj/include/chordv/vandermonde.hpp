#pragma once

#include "chordv/hankel.hpp"
#include "chordv/linalg.hpp"
#include "chordv/signal_model.hpp"

#include <vector>

namespace chordv {

/// Signal poles z_r together with the signal length they are meant to
/// generate.
struct PoleSet {
    std::vector<Complex> poles;
    Eigen::Index n = 0;

    Eigen::Index rank() const noexcept { return static_cast<Eigen::Index>(poles.size()); }
};

/// N x R matrix with entry (n, r) = z_r^n, built by repeated
/// multiplication down each column so that row n+1 equals z_r times row n
/// exactly.
struct VandermondeMatrix {
    PoleSet base;
    ComplexMatrix entries;
};

using AmplitudeVector = ComplexVector;

struct PoleEstimateOptions {
    /// Singular values of the shifted basis below rcond * s_max count as
    /// zero; any such value makes the estimate fail with ConditioningError.
    double rcond = 1e-12;
};

/// Shift-invariance pole estimate from a P x R orthonormal basis U:
/// eigenvalues of pinv(U without its last row) * (U without its first
/// row). Poles are returned sorted by angle, then magnitude. `target_length`
/// becomes the n of the returned set.
PoleSet estimate_poles(const ComplexMatrix& left_basis, Eigen::Index target_length,
                       const PoleEstimateOptions& options = {});

/// Throws ValidationError if poles.n < 1, NumericalError if a power
/// overflows.
VandermondeMatrix build_vandermonde(const PoleSet& poles);

struct VandermondeFitOptions {
    PoleEstimateOptions pole_estimate;
    /// Project estimated poles with |z| > 1 back onto the unit circle.
    bool clamp_to_unit_disk = false;
};

/// Hankelize x, truncate to rank r_hat, estimate poles from the left
/// singular basis and expand them into an N x r_hat Vandermonde matrix.
/// Requires 1 <= r_hat <= min(P, Q) - 1.
VandermondeMatrix vandermonde_from_signal(const ComplexVector& x, Eigen::Index r_hat,
                                          const VandermondeFitOptions& options = {});
VandermondeMatrix vandermonde_from_signal(const Fid& x, Eigen::Index r_hat,
                                          const VandermondeFitOptions& options = {});

/// argmin_c gamma/2 ||c||^2 + mu/2 ||x - Z c||^2, i.e.
/// (mu Z^H Z + gamma I)^{-1} mu Z^H x. With gamma = 0 this is the plain
/// least-squares fit and a rank-deficient Z raises NumericalError.
AmplitudeVector solve_amplitudes(const ComplexVector& x, const VandermondeMatrix& z, double mu,
                                 double gamma);

/// gamma c + mu Z^H (Z c - x); zero at the solve_amplitudes optimum.
ComplexVector amplitude_gradient(const ComplexVector& x, const VandermondeMatrix& z,
                                 const AmplitudeVector& c, double mu, double gamma);

} // namespace chordv
