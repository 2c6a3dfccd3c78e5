#pragma once

#include "chordv/harness.hpp"

#include <iosfwd>
#include <string>

namespace chordv {

/// Reads an experiment file. Grammar (INI):
///
///   # full-line comments start with '#' or ';'
///   [experiment]
///   model = reference_5peak | custom | <path to clean FID csv>
///   solvers = chord_v, chord, cadzow, rqrd, tsvd
///   sigmas = 0.02, 0.04
///   r_hats = 5, 10, 20
///   trials = 100
///   base_seed = 1
///   threads = 0
///   output = results.csv
///   timing = false
///   peak_statistic = pearson | height_ratio
///   peak_window_fwhm = 5
///   snapshots = 0, 8, 9, 20
///
///   [model]                  ; only read when model = custom
///   dt = 0.001
///   n_samples = 256
///   components = 0.1 -300 30; 1.0 0 30   ; amplitude frequency decay
///
///   [chord_v] lambda mu gamma beta tau eta max_iter r_hat adjoint(sum|average)
///             threshold(inv_beta|gamma_over_beta) dual_init(ones|zero)
///             overwrite clamp_poles
///   [chord]   lambda beta tau eta max_iter adjoint dual_init
///   [cadzow]  r_hat max_iter eta
///   [rqrd]    r_hat
///   [tsvd]    r_hat
///
/// Every key is optional; missing keys keep the value already in `base`.
/// Unknown sections or keys are rejected.
ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base = {});

/// Parses only the solver sections of an INI document.
SolverSettings parse_solver_settings(std::istream& in, SolverSettings base);

std::vector<double> parse_double_list(const std::string& text);
std::vector<Eigen::Index> parse_index_list(const std::string& text);

} // namespace chordv
