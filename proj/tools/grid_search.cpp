#include "chordv/errors.hpp"
#include "chordv/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <limits>

using namespace chordv;

namespace {

double mean_nrmse(SolverKind kind, const SolverSettings& s, double sigma, int seeds, std::uint64_t base_seed)
{
    ExperimentConfig cfg;
    cfg.solvers = {kind};
    cfg.settings = s;
    cfg.sigmas = {sigma};
    cfg.trials = seeds;
    cfg.base_seed = base_seed;
    double sum = 0.0;
    for (const auto& r : run_noise_sweep(cfg)) {
        if (r.failed()) return std::numeric_limits<double>::infinity();
        sum += r.nrmse;
    }
    return sum / seeds;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"coarse grid search for chord_v and chord weights"};
    double sigma = 0.04;
    int seeds = 20;
    std::uint64_t seed = 0;
    Eigen::Index r_hat = 5;
    app.add_option("--sigma", sigma);
    app.add_option("--seeds", seeds);
    app.add_option("--seed", seed);
    app.add_option("--r-hat", r_hat);
    CLI11_PARSE(app, argc, argv);

    const double weights[] = {1e-2, 1e-1, 1.0, 10.0, 100.0};
    const double gammas[] = {1e-3, 1e-2, 1e-1, 1.0};
    try {
        SolverSettings s = default_solver_settings();
        s.chord_v.r_hat = r_hat;

        double best = std::numeric_limits<double>::infinity();
        double best_l = 0, best_m = 0, best_g = 0;
        for (double l : weights)
            for (double m : weights)
                for (double g : gammas) {
                    s.chord_v.lambda = l;
                    s.chord_v.mu = m;
                    s.chord_v.gamma = g;
                    const double e = mean_nrmse(SolverKind::ChordV, s, sigma, seeds, seed);
                    std::printf("chord_v lambda=%g mu=%g gamma=%g nrmse=%.6g\n", l, m, g, e);
                    std::fflush(stdout);
                    if (e < best) {
                        best = e;
                        best_l = l;
                        best_m = m;
                        best_g = g;
                    }
                }
        std::printf("best chord_v lambda=%g mu=%g gamma=%g nrmse=%.6g\n", best_l, best_m, best_g, best);

        best = std::numeric_limits<double>::infinity();
        for (double l : weights) {
            s.chord.lambda = l;
            const double e = mean_nrmse(SolverKind::Chord, s, sigma, seeds, seed);
            std::printf("chord lambda=%g nrmse=%.6g\n", l, e);
            if (e < best) {
                best = e;
                best_l = l;
            }
        }
        std::printf("best chord lambda=%g nrmse=%.6g\n", best_l, best);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 0;
}
