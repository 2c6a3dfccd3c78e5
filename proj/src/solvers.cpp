#include "chordv/solvers.hpp"

#include "chordv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace chordv {

namespace {

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be positive and finite");
}

void require_iterations(int max_iter, double eta)
{
    if (max_iter < 1)
        throw ValidationError("max_iter must be >= 1");
    if (!std::isfinite(eta) || eta < 0.0)
        throw ValidationError("eta must be finite and >= 0");
}

ComplexMatrix initial_dual(const HankelShape& shape, DualInit init)
{
    return init == DualInit::Ones ? ComplexMatrix::Ones(shape.p, shape.q)
                                  : ComplexMatrix::Zero(shape.p, shape.q);
}

ComplexVector apply_adjoint(const ComplexMatrix& m, const HankelShape& shape, AdjointMode mode)
{
    return mode == AdjointMode::Sum ? dehankelize_sum(m, shape) : dehankelize_avg(m, shape);
}

// Diagonal of R*R under the chosen adjoint.
Eigen::VectorXd adjoint_gram(const HankelShape& shape, AdjointMode mode)
{
    return mode == AdjointMode::Sum ? antidiag_weights_real(shape) : Eigen::VectorXd::Ones(shape.n);
}

void require_finite(const ComplexVector& x, const char* solver, int iteration)
{
    if (!x.allFinite())
        throw NumericalError(std::string(solver) + ": non-finite iterate at iteration " +
                             std::to_string(iteration));
}

void require_rank(Eigen::Index r_hat, Eigen::Index limit, const char* solver)
{
    if (r_hat < 1 || r_hat > limit)
        throw ValidationError(std::string(solver) + ": r_hat " + std::to_string(r_hat) + " outside [1, " +
                              std::to_string(limit) + "]");
}

SolverResult single_pass_result(const Fid& y, ComplexVector out)
{
    const double delta = relative_change(out, y.samples());
    SolverResult result{Fid(std::move(out), y.dt()), {delta}, 1, true, {}, {}, {}};
    return result;
}

} // namespace

void ChordVConfig::validate(Eigen::Index signal_length) const
{
    require_positive(lambda, "lambda");
    require_positive(mu, "mu");
    require_positive(beta, "beta");
    require_positive(tau, "tau");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw ValidationError("gamma must be finite and >= 0");
    require_iterations(max_iter, eta);
    const auto shape = HankelShape::for_length(signal_length);
    if (r_hat < 1 || r_hat >= shape.min_dim())
        throw ValidationError("r_hat " + std::to_string(r_hat) + " must lie in [1, " +
                              std::to_string(shape.min_dim() - 1) + "] for N=" + std::to_string(signal_length));
}

void ChordConfig::validate() const
{
    require_positive(lambda, "lambda");
    require_positive(beta, "beta");
    require_positive(tau, "tau");
    require_iterations(max_iter, eta);
}

double relative_change(const ComplexVector& x_new, const ComplexVector& x_old)
{
    const double denom = x_new.norm();
    if (denom == 0.0)
        return x_old.norm() == 0.0 ? 0.0 : 1.0;
    return (x_new - x_old).norm() / denom;
}

SolverResult chord_v(const Fid& y, const ChordVConfig& cfg, const IterationObserver& observer)
{
    cfg.validate(y.size());
    const auto shape = HankelShape::for_length(y.size());
    const Eigen::VectorXd gram = adjoint_gram(shape, cfg.adjoint);
    const Eigen::VectorXd weights = antidiag_weights_real(shape);
    const Eigen::ArrayXd denom = (cfg.lambda + cfg.mu) + cfg.beta * gram.array();
    const double threshold =
        cfg.threshold == ThresholdMode::InverseBeta ? 1.0 / cfg.beta : cfg.gamma / cfg.beta;

    VandermondeFitOptions fit;
    fit.clamp_to_unit_disk = cfg.clamp_poles;

    const ComplexVector& obs = y.samples();
    ComplexMatrix dual = initial_dual(shape, cfg.dual_init);
    ComplexMatrix low_rank = ComplexMatrix::Zero(shape.p, shape.q);

    VandermondeMatrix basis;
    AmplitudeVector amps;
    try {
        basis = vandermonde_from_signal(obs, cfg.r_hat, fit);
        amps = solve_amplitudes(obs, basis, 1.0, 0.0);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("chord_v initialization: ") + e.what());
    }
    ComplexVector x = obs;

    SolverResult result{y, {}, 0, false, {}, {}, {}};
    for (int k = 1; k <= cfg.max_iter; ++k) {
        const ComplexVector x_prev = x;
        try {
            const ComplexVector model = basis.entries * amps;
            const ComplexVector coupling = apply_adjoint(cfg.beta * low_rank - dual, shape, cfg.adjoint);
            x = ((cfg.lambda * obs + cfg.mu * model + coupling).array() / denom).matrix();

            if (cfg.check_stationarity) {
                // lambda (x - y) + mu (x - Zc) + R*(beta R x - beta X + D), exact adjoint
                const ComplexMatrix residual = cfg.beta * (hankelize(x, shape) - low_rank) + dual;
                const ComplexVector grad =
                    cfg.lambda * (x - obs) + cfg.mu * (x - model) + dehankelize_sum(residual, shape);
                const ComplexVector sum_coupling = dehankelize_sum(cfg.beta * low_rank - dual, shape);
                const double scale = cfg.lambda * obs.norm() + cfg.mu * model.norm() + sum_coupling.norm() +
                                     cfg.beta * (weights.cast<Complex>().cwiseProduct(x)).norm();
                result.stationarity.push_back(scale > 0.0 ? grad.norm() / scale : grad.norm());
            }

            basis = vandermonde_from_signal(x, cfg.r_hat, fit);
            amps = solve_amplitudes(x, basis, cfg.mu, cfg.gamma);
            if (cfg.overwrite_with_model)
                x = basis.entries * amps;

            const ComplexMatrix lifted = hankelize(x, shape);
            low_rank = soft_threshold_svd(lifted + dual / cfg.beta, threshold);
            dual += cfg.tau * (lifted - low_rank);
        } catch (const NumericalError& e) {
            throw NumericalError("chord_v iteration " + std::to_string(k) + ": " + e.what());
        }
        require_finite(x, "chord_v", k);

        const double delta = relative_change(x, x_prev);
        result.delta_trace.push_back(delta);
        result.iterations = k;
        if (observer) observer(IterationView{k, x, delta});
        if (delta <= cfg.eta) {
            result.converged = true;
            break;
        }
    }

    // Order the final poles by fitted amplitude, strongest first.
    std::vector<std::size_t> order(amps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(amps[static_cast<Eigen::Index>(a)]) > std::abs(amps[static_cast<Eigen::Index>(b)]);
    });
    PoleSet poles{{}, shape.n};
    AmplitudeVector sorted_amps(amps.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        poles.poles.push_back(basis.base.poles[order[i]]);
        sorted_amps[static_cast<Eigen::Index>(i)] = amps[static_cast<Eigen::Index>(order[i])];
    }
    result.poles = std::move(poles);
    result.amplitudes = std::move(sorted_amps);
    result.denoised = Fid(std::move(x), y.dt());
    return result;
}

SolverResult chord(const Fid& y, const ChordConfig& cfg, const IterationObserver& observer)
{
    cfg.validate();
    const auto shape = HankelShape::for_length(y.size());
    const Eigen::ArrayXd denom = cfg.lambda + cfg.beta * adjoint_gram(shape, cfg.adjoint).array();
    const double threshold = 1.0 / cfg.beta;

    const ComplexVector& obs = y.samples();
    ComplexMatrix dual = initial_dual(shape, cfg.dual_init);
    ComplexMatrix low_rank = ComplexMatrix::Zero(shape.p, shape.q);
    ComplexVector x = obs;

    SolverResult result{y, {}, 0, false, {}, {}, {}};
    for (int k = 1; k <= cfg.max_iter; ++k) {
        const ComplexVector x_prev = x;
        try {
            const ComplexVector coupling = apply_adjoint(cfg.beta * low_rank - dual, shape, cfg.adjoint);
            x = ((cfg.lambda * obs + coupling).array() / denom).matrix();
            const ComplexMatrix lifted = hankelize(x, shape);
            low_rank = soft_threshold_svd(lifted + dual / cfg.beta, threshold);
            dual += cfg.tau * (lifted - low_rank);
        } catch (const NumericalError& e) {
            throw NumericalError("chord iteration " + std::to_string(k) + ": " + e.what());
        }
        require_finite(x, "chord", k);

        const double delta = relative_change(x, x_prev);
        result.delta_trace.push_back(delta);
        result.iterations = k;
        if (observer) observer(IterationView{k, x, delta});
        if (delta <= cfg.eta) {
            result.converged = true;
            break;
        }
    }
    result.denoised = Fid(std::move(x), y.dt());
    return result;
}

SolverResult cadzow(const Fid& y, const CadzowConfig& cfg)
{
    const auto shape = HankelShape::for_length(y.size());
    require_rank(cfg.r_hat, shape.min_dim(), "cadzow");
    require_iterations(cfg.max_iter, cfg.eta);

    ComplexVector x = y.samples();
    SolverResult result{y, {}, 0, false, {}, {}, {}};
    for (int k = 1; k <= cfg.max_iter; ++k) {
        ComplexVector next = dehankelize_avg(truncate_rank(hankelize(x, shape), cfg.r_hat).truncated, shape);
        require_finite(next, "cadzow", k);
        const double delta = relative_change(next, x);
        x = std::move(next);
        result.delta_trace.push_back(delta);
        result.iterations = k;
        if (delta <= cfg.eta) {
            result.converged = true;
            break;
        }
    }
    result.denoised = Fid(std::move(x), y.dt());
    return result;
}

SolverResult rqrd(const Fid& y, const RqrdConfig& cfg)
{
    const auto shape = HankelShape::for_length(y.size());
    require_rank(cfg.r_hat, shape.q, "rqrd");

    const ComplexMatrix h = hankelize(y.samples(), shape);
    const double h_norm = h.norm();

    // Stream 0 is reserved for measurement noise; sketches use 1, then 2
    // for the single redraw.
    for (std::uint64_t stream = 1; stream <= 2; ++stream) {
        GaussianStream gauss(cfg.seed, stream);
        ComplexMatrix sketch(shape.q, cfg.r_hat);
        for (Eigen::Index col = 0; col < cfg.r_hat; ++col)
            for (Eigen::Index row = 0; row < shape.q; ++row) {
                const double re = gauss.next();
                const double im = gauss.next();
                sketch(row, col) = Complex(re, im);
            }

        const ComplexMatrix range = h * sketch;
        Eigen::ColPivHouseholderQR<ComplexMatrix> qr(range);
        qr.setThreshold(1e-10);
        const Eigen::Index rank = qr.rank();
        const ComplexMatrix basis = ComplexMatrix(qr.householderQ()).leftCols(rank);
        const ComplexMatrix projected = basis * (basis.adjoint() * h);

        // A sketch of rank below r_hat is only acceptable when the Hankel
        // matrix itself has no range left outside it.
        if (rank < cfg.r_hat && (h - projected).norm() > 1e-8 * h_norm)
            continue;

        ComplexVector out = dehankelize_avg(projected, shape);
        require_finite(out, "rqrd", 1);
        return single_pass_result(y, std::move(out));
    }
    throw NumericalError("rqrd: random sketch is rank deficient after one redraw");
}

SolverResult tsvd_denoise(const Fid& y, Eigen::Index r_hat)
{
    const auto shape = HankelShape::for_length(y.size());
    require_rank(r_hat, shape.min_dim(), "tsvd");
    ComplexVector out = dehankelize_avg(truncate_rank(hankelize(y.samples(), shape), r_hat).truncated, shape);
    require_finite(out, "tsvd", 1);
    return single_pass_result(y, std::move(out));
}

std::string_view to_string(AdjointMode mode) noexcept
{
    return mode == AdjointMode::Sum ? "sum" : "average";
}

std::string_view to_string(ThresholdMode mode) noexcept
{
    return mode == ThresholdMode::InverseBeta ? "inv_beta" : "gamma_over_beta";
}

std::string_view to_string(DualInit init) noexcept
{
    return init == DualInit::Ones ? "ones" : "zero";
}

} // namespace chordv
