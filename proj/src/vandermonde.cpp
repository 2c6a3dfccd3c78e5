#include "chordv/vandermonde.hpp"

#include "chordv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace chordv {

PoleSet estimate_poles(const ComplexMatrix& left_basis, Eigen::Index target_length,
                       const PoleEstimateOptions& options)
{
    const Eigen::Index p = left_basis.rows();
    const Eigen::Index r = left_basis.cols();
    if (r < 1)
        throw ValidationError("estimate_poles: basis has no columns");
    if (p < r + 1)
        throw ValidationError("estimate_poles: basis is " + std::to_string(p) + "x" + std::to_string(r) +
                              ", needs at least " + std::to_string(r + 1) + " rows");

    const ComplexMatrix without_last = left_basis.topRows(p - 1);
    const ComplexMatrix without_first = left_basis.bottomRows(p - 1);

    const auto svd = linalg::thin_svd(without_last);
    const double cutoff = options.rcond * svd.s[0];
    if (!(svd.s[0] > 0.0) || svd.s[r - 1] <= cutoff)
        throw ConditioningError("estimate_poles: shifted basis is rank deficient (smallest singular value " +
                                std::to_string(svd.s[r - 1]) + ", largest " + std::to_string(svd.s[0]) + ")");

    // pinv(U_l) U_f = V S^-1 W^H U_f
    const ComplexMatrix projected = svd.u.adjoint() * without_first;
    const ComplexMatrix shift =
        svd.vh.adjoint() * (svd.s.cwiseInverse().asDiagonal() * projected);

    Eigen::ComplexEigenSolver<ComplexMatrix> eig(shift, /*computeEigenvectors=*/false);
    if (eig.info() != Eigen::Success)
        throw NumericalError("estimate_poles: eigenvalue iteration did not converge");

    PoleSet out;
    out.n = target_length;
    out.poles.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + r);
    std::sort(out.poles.begin(), out.poles.end(), [](const Complex& a, const Complex& b) {
        const double aa = std::arg(a), ab = std::arg(b);
        if (aa != ab) return aa < ab;
        return std::abs(a) < std::abs(b);
    });
    return out;
}

VandermondeMatrix build_vandermonde(const PoleSet& poles)
{
    if (poles.n < 1)
        throw ValidationError("build_vandermonde: target length must be >= 1");
    VandermondeMatrix out{poles, ComplexMatrix(poles.n, poles.rank())};
    for (Eigen::Index r = 0; r < poles.rank(); ++r) {
        const Complex z = poles.poles[static_cast<std::size_t>(r)];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("build_vandermonde: pole " + std::to_string(r) + " is not finite");
        Complex power(1.0, 0.0);
        for (Eigen::Index k = 0; k < poles.n; ++k) {
            out.entries(k, r) = power;
            power *= z;
        }
    }
    if (!out.entries.allFinite())
        throw NumericalError("build_vandermonde: pole powers overflow for length " + std::to_string(poles.n));
    return out;
}

VandermondeMatrix vandermonde_from_signal(const ComplexVector& x, Eigen::Index r_hat,
                                          const VandermondeFitOptions& options)
{
    const auto shape = HankelShape::for_length(x.size());
    if (r_hat < 1 || r_hat > shape.min_dim() - 1)
        throw ValidationError("r_hat " + std::to_string(r_hat) + " outside [1, " +
                              std::to_string(shape.min_dim() - 1) + "] for N=" + std::to_string(x.size()));
    const auto truncation = truncate_rank(hankelize(x, shape), r_hat);
    PoleSet poles = estimate_poles(truncation.left_basis, shape.n, options.pole_estimate);
    if (options.clamp_to_unit_disk) {
        for (auto& z : poles.poles) {
            const double mag = std::abs(z);
            if (mag > 1.0) z /= mag;
        }
    }
    return build_vandermonde(poles);
}

VandermondeMatrix vandermonde_from_signal(const Fid& x, Eigen::Index r_hat,
                                          const VandermondeFitOptions& options)
{
    return vandermonde_from_signal(x.samples(), r_hat, options);
}

AmplitudeVector solve_amplitudes(const ComplexVector& x, const VandermondeMatrix& z, double mu,
                                 double gamma)
{
    const Eigen::Index n = z.entries.rows();
    const Eigen::Index r = z.entries.cols();
    if (x.size() != n)
        throw ValidationError("solve_amplitudes: signal length " + std::to_string(x.size()) +
                              " does not match Vandermonde rows " + std::to_string(n));
    if (!(mu > 0.0))
        throw ValidationError("solve_amplitudes: mu must be > 0");
    if (!(gamma >= 0.0))
        throw ValidationError("solve_amplitudes: gamma must be >= 0");

    // Equilibrate columns (Z = Zs S) so the solve does not depend on how
    // fast each pole decays or grows; c = S^-1 d.
    const Eigen::VectorXd col_norms = z.entries.colwise().norm().transpose();
    const ComplexMatrix scaled = z.entries * col_norms.cwiseInverse().asDiagonal();

    ComplexVector d;
    if (gamma == 0.0) {
        Eigen::ColPivHouseholderQR<ComplexMatrix> qr(scaled);
        qr.setThreshold(1e-10);
        if (qr.rank() < r)
            throw NumericalError("solve_amplitudes: Vandermonde matrix is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " of " + std::to_string(r) +
                                 "); retry with gamma > 0");
        d = qr.solve(x);
    } else {
        // [sqrt(mu) Zs; sqrt(gamma) S^-1] d = [sqrt(mu) x; 0]
        ComplexMatrix stacked(n + r, r);
        stacked.topRows(n) = std::sqrt(mu) * scaled;
        stacked.bottomRows(r).setZero();
        stacked.bottomRows(r).diagonal() = (std::sqrt(gamma) * col_norms.cwiseInverse()).cast<Complex>();
        ComplexVector rhs = ComplexVector::Zero(n + r);
        rhs.head(n) = std::sqrt(mu) * x;
        d = stacked.householderQr().solve(rhs);
    }
    AmplitudeVector c = col_norms.cwiseInverse().asDiagonal() * d;
    if (!c.allFinite())
        throw NumericalError("solve_amplitudes: non-finite amplitudes");
    return c;
}

ComplexVector amplitude_gradient(const ComplexVector& x, const VandermondeMatrix& z,
                                 const AmplitudeVector& c, double mu, double gamma)
{
    return gamma * c + mu * (z.entries.adjoint() * (z.entries * c - x));
}

} // namespace chordv
