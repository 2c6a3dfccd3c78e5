#pragma once

#include "chordv/signal_model.hpp"
#include "chordv/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chordv {

enum class SolverKind { ChordV, Chord, Cadzow, Rqrd, Tsvd };

std::string_view solver_name(SolverKind kind) noexcept;
/// Accepts chord_v, chord, cadzow, rqrd, tsvd.
SolverKind parse_solver_kind(std::string_view name);

/// Per-solver parameters. The r_hat fields are the ranks used by the noise
/// sweep; the rank sweep overrides them.
struct SolverSettings {
    ChordVConfig chord_v;
    ChordConfig chord;
    CadzowConfig cadzow;
    Eigen::Index rqrd_r_hat = 0;
    Eigen::Index tsvd_r_hat = 0;
};

/// Values from the committed config/defaults.conf, compiled into the
/// library.
SolverSettings default_solver_settings();

/// Statistic stored in TrialRecord::per_peak_correlation.
enum class PeakStatistic {
    /// Pearson correlation of magnitude bins inside each peak window.
    Pearson,
    /// min(h_d, h_t) / max(h_d, h_t) of the window maxima of the magnitude
    /// spectra: 1 when the denoised peak height matches the truth.
    HeightRatio,
};

struct ExperimentConfig {
    /// Synthetic ground truth; ignored when reference_path is set.
    ModelSpec model = reference_5peak();
    /// Clean reference FID file (real-data mode). Noise is injected on top.
    std::string reference_path;

    std::vector<SolverKind> solvers{SolverKind::ChordV};
    SolverSettings settings = default_solver_settings();
    std::vector<double> sigmas{0.04};
    std::vector<Eigen::Index> r_hats;
    int trials = 1;
    std::uint64_t base_seed = 0;
    std::string output_path;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Wall time is nondeterministic, so it is only written when asked for.
    bool record_wall_time = false;

    PeakStatistic peak_statistic = PeakStatistic::Pearson;
    /// Half-width of each peak window in units of the peak's FWHM.
    double peak_window_fwhm = 5.0;
    /// Iterations at which the convergence trace emits spectra.
    std::vector<int> snapshots{0, 8, 9, 20};

    void validate() const;
};

struct TrialRecord {
    std::string solver;
    double sigma = 0.0;
    std::optional<Eigen::Index> r_hat;
    int trial = 0;
    double nrmse = 0.0;
    int iterations = 0;
    bool converged = false;
    std::optional<double> wall_time;
    std::vector<std::optional<double>> per_peak_correlation;
    /// Non-empty when the solver failed; such rows carry no nrmse and are
    /// excluded from aggregates.
    std::string error;

    bool failed() const noexcept { return !error.empty(); }
    bool operator==(const TrialRecord&) const = default;
};

/// Closed frequency interval [low_hz, high_hz] around one true peak.
struct PeakWindow {
    double low_hz = 0.0;
    double high_hz = 0.0;
};

/// One window per component, centred on its frequency with half-width
/// fwhm_multiple * decay / pi (at least two bins). Overlapping neighbours
/// are split at the midpoint between their centres. Sorted by frequency.
std::vector<PeakWindow> peak_windows(const ModelSpec& model, double fwhm_multiple);

/// Pearson correlation of |bins| restricted to each window; nullopt when
/// either side is flat or the window holds fewer than two bins.
std::vector<std::optional<double>> peak_correlation(const Spectrum& denoised, const Spectrum& truth,
                                                    const std::vector<PeakWindow>& windows);

std::vector<std::optional<double>> peak_height_ratio(const Spectrum& denoised, const Spectrum& truth,
                                                     const std::vector<PeakWindow>& windows);

/// For each (sigma, solver, trial): add noise seeded with base_seed + trial,
/// denoise, score. Rows come back sorted by (solver, sigma, r_hat, trial).
std::vector<TrialRecord> run_noise_sweep(const ExperimentConfig& cfg);

/// As run_noise_sweep, for every r_hat in cfg.r_hats. CHORD runs once per
/// (sigma, trial) and is replicated across the r_hat rows.
std::vector<TrialRecord> run_rank_sweep(const ExperimentConfig& cfg);

struct SpectrumSnapshot {
    int iteration = 0;
    /// Iterate the spectrum was taken from. Requests past the final
    /// iteration get the final iterate.
    int source_iteration = 0;
    Spectrum spectrum;
};

struct ConvergenceTrace {
    SolverResult result;
    std::vector<double> nrmse_trace; // one per iteration, aligned with delta_trace
    std::vector<SpectrumSnapshot> snapshots;
};

/// Runs chord_v on y, scoring every iterate against truth. Iteration 0 is
/// the noisy input.
ConvergenceTrace run_convergence_trace(const Fid& y, const Fid& truth, const ChordVConfig& cfg,
                                       const std::vector<int>& snapshot_iterations);

/// Header: solver,sigma,r_hat,trial,nrmse,iterations,converged,wall_time_s,
/// then peak_corr_1..peak_corr_R with R the widest record. Missing values
/// are empty fields. Rows are written in (solver, sigma, r_hat, trial)
/// order.
void write_records_csv(std::vector<TrialRecord> records, std::ostream& out);
void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> parse_records_csv(std::istream& in);

struct Aggregate {
    std::string solver;
    double sigma = 0.0;
    std::optional<Eigen::Index> r_hat;
    int count = 0;
    int failures = 0;
    double mean_nrmse = 0.0;
    double std_nrmse = 0.0; // sample standard deviation (n - 1)
    std::vector<std::optional<double>> mean_peak_correlation;
};

/// Groups successful records by (solver, sigma, r_hat).
std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records);

void sort_records(std::vector<TrialRecord>& records);

} // namespace chordv
