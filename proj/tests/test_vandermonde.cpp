#include "chordv/errors.hpp"
#include "chordv/vandermonde.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace chordv;

namespace {

std::vector<Complex> true_poles(const ModelSpec& m)
{
    std::vector<Complex> z;
    for (const auto& c : m.components) z.push_back(pole_of(c, m.dt));
    return z;
}

ComplexMatrix orthonormal_basis(const ComplexVector& x, Eigen::Index r)
{
    return truncate_rank(hankelize(x, HankelShape::for_length(x.size())), r).left_basis;
}

} // namespace

TEST(PoleOf, Definition)
{
    const ExponentialComponent c{2.0, 50.0, 30.0};
    const Complex z = pole_of(c, 1e-3);
    EXPECT_NEAR(std::abs(z), std::exp(-0.03), 1e-15);
    EXPECT_NEAR(std::arg(z), 2.0 * std::numbers::pi * 0.05, 1e-15);
}

TEST(EstimatePoles, SingleColumn)
{
    const Complex z = std::polar(0.9, 0.3);
    ComplexVector col(40);
    Complex p = 1.0;
    for (Eigen::Index n = 0; n < 40; ++n, p *= z) col[n] = p;
    col.normalize();
    const PoleSet est = estimate_poles(col, 79);
    ASSERT_EQ(est.rank(), 1);
    EXPECT_EQ(est.n, 79);
    EXPECT_LT(std::abs(est.poles[0] - z), 1e-8);
}

TEST(EstimatePoles, TwoExponentials)
{
    const std::vector<Complex> z{std::polar(0.97, -1.1), std::polar(0.99, 0.8)};
    const ComplexVector x = oracle::exponential_sum({1.0, Complex(0.3, 0.4)}, z, 64);
    const PoleSet est = estimate_poles(orthonormal_basis(x, 2), 64);
    EXPECT_LT(oracle::pole_set_error(z, est.poles), 1e-8);
}

TEST(EstimatePoles, UndampedHasUnitModulus)
{
    const ComplexVector x = oracle::exponential_sum({1.0}, {std::polar(1.0, 0.45)}, 64);
    const PoleSet est = estimate_poles(orthonormal_basis(x, 1), 64);
    EXPECT_NEAR(std::abs(est.poles[0]), 1.0, 1e-8);
}

TEST(EstimatePoles, RecoversRandomSystemsUpToEight)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> mag(0.9, 1.0), ang(-std::numbers::pi, std::numbers::pi);
    std::normal_distribution<double> g;
    for (int r = 1; r <= 8; ++r) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Complex> z, c;
            while (static_cast<int>(z.size()) < r) {
                const Complex cand = std::polar(mag(rng), ang(rng));
                bool far = true;
                for (const auto& e : z) far = far && std::abs(e - cand) > 0.15;
                if (!far) continue;
                z.push_back(cand);
                c.push_back(std::polar(0.3 + std::abs(g(rng)), ang(rng)));
            }
            const ComplexVector x = oracle::exponential_sum(c, z, 128);
            const PoleSet est = vandermonde_from_signal(x, r).base;
            EXPECT_LT(oracle::pole_set_error(z, est.poles), 1e-6) << "R=" << r << " trial=" << trial;
        }
    }
}

TEST(EstimatePoles, InvariantUnderBasisRotation)
{
    const ModelSpec m = reference_5peak();
    const ComplexMatrix u = orthonormal_basis(synthesize_fid(m).samples(), 5);
    const PoleSet base = estimate_poles(u, 256);
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix rotated = u * oracle::random_unitary(rng, 5);
        EXPECT_LT(oracle::pole_set_error(base.poles, estimate_poles(rotated, 256).poles), 1e-8);
    }
}

TEST(EstimatePoles, SortedByAngle)
{
    const PoleSet est = vandermonde_from_signal(synthesize_fid(reference_5peak()), 5).base;
    for (std::size_t i = 0; i + 1 < est.poles.size(); ++i)
        EXPECT_LE(std::arg(est.poles[i]), std::arg(est.poles[i + 1]));
}

TEST(EstimatePoles, Errors)
{
    EXPECT_THROW(estimate_poles(ComplexMatrix::Identity(3, 3), 10), ValidationError); // P < R + 1
    // Last row carries all the energy of the second column: U without its
    // last row is rank deficient.
    ComplexMatrix u = ComplexMatrix::Zero(4, 2);
    u(0, 0) = 1.0;
    u(3, 1) = 1.0;
    EXPECT_THROW(estimate_poles(u, 10), ConditioningError);
}

TEST(BuildVandermonde, Examples)
{
    const VandermondeMatrix ones = build_vandermonde({{1.0}, 3});
    EXPECT_EQ(ones.entries, ComplexMatrix::Ones(3, 1));

    const VandermondeMatrix row = build_vandermonde({{Complex(0.5, 0.5), Complex(-2.0, 1.0)}, 1});
    ASSERT_EQ(row.entries.rows(), 1);
    EXPECT_EQ(row.entries, ComplexMatrix::Ones(1, 2));

    EXPECT_THROW(build_vandermonde({{1.0}, 0}), ValidationError);
    EXPECT_THROW(build_vandermonde({{Complex(NAN, 0.0)}, 3}), NumericalError);
    EXPECT_THROW(build_vandermonde({{Complex(1e200, 0.0)}, 4}), NumericalError);
}

TEST(BuildVandermonde, ShiftInvarianceIsExact)
{
    const std::vector<Complex> z{std::polar(0.95, 0.1), std::polar(1.01, -2.0), Complex(0.3, 0.0)};
    const VandermondeMatrix v = build_vandermonde({z, 50});
    for (Eigen::Index r = 0; r < 3; ++r) {
        EXPECT_EQ(v.entries(0, r), Complex(1.0));
        for (Eigen::Index n = 0; n + 1 < 50; ++n) EXPECT_EQ(v.entries(n + 1, r), v.entries(n, r) * z[r]);
    }
}

TEST(BuildVandermonde, ReproducesReferenceSignal)
{
    const ModelSpec m = reference_5peak();
    const VandermondeMatrix v = build_vandermonde({true_poles(m), 256});
    ComplexVector c(5);
    for (int r = 0; r < 5; ++r) c[r] = m.components[r].amplitude;
    const ComplexVector x = synthesize_fid(m).samples();
    EXPECT_LT((v.entries * c - x).norm(), 1e-10 * x.norm());
}

TEST(OperatorZ, SingleExponential)
{
    const Complex z = std::polar(0.985, 2.2);
    const ComplexVector x = oracle::exponential_sum({Complex(0.7, -0.2)}, {z}, 100);
    const VandermondeMatrix v = vandermonde_from_signal(x, 1);
    ASSERT_EQ(v.entries.cols(), 1);
    EXPECT_EQ(v.entries.rows(), 100);
    EXPECT_LT(std::abs(v.base.poles[0] - z), 1e-8);
}

TEST(OperatorZ, ReferenceModelExactRank)
{
    const ModelSpec m = reference_5peak();
    const VandermondeMatrix v = vandermonde_from_signal(synthesize_fid(m), 5);
    EXPECT_LT(oracle::pole_set_error(true_poles(m), v.base.poles), 1e-6);
}

TEST(OperatorZ, ReferenceModelOverestimatedRank)
{
    const ModelSpec m = reference_5peak();
    const Fid x = synthesize_fid(m);
    const VandermondeMatrix v = vandermonde_from_signal(x, 8);
    ASSERT_EQ(v.base.rank(), 8);
    const auto z = true_poles(m);
    EXPECT_LT(oracle::pole_set_error(z, v.base.poles), 1e-4);

    const AmplitudeVector c = solve_amplitudes(x.samples(), v, 1.0, 1e-8);
    for (Eigen::Index r = 0; r < 8; ++r) {
        double nearest = INFINITY;
        for (const auto& t : z) nearest = std::min(nearest, std::abs(t - v.base.poles[static_cast<std::size_t>(r)]));
        if (nearest > 1e-4) {
            EXPECT_LT(std::abs(c[r]), 1e-3) << "spurious pole " << r;
        }
    }
    EXPECT_LT((v.entries * c - x.samples()).norm(), 1e-6 * x.samples().norm());
}

TEST(OperatorZ, RankRange)
{
    const Fid x = synthesize_fid(reference_5peak());
    EXPECT_THROW(vandermonde_from_signal(x, 0), ValidationError);
    EXPECT_THROW(vandermonde_from_signal(x, 128), ValidationError);
    EXPECT_NO_THROW(vandermonde_from_signal(x, 127));
}

TEST(OperatorZ, ClampKeepsPolesInUnitDisk)
{
    std::vector<Complex> z{std::polar(1.02, 0.4), std::polar(0.9, -1.0)};
    const ComplexVector x = oracle::exponential_sum({1.0, 1.0}, z, 64);
    VandermondeFitOptions opt;
    opt.clamp_to_unit_disk = true;
    const VandermondeMatrix v = vandermonde_from_signal(x, 2, opt);
    for (const auto& p : v.base.poles) EXPECT_LE(std::abs(p), 1.0 + 1e-15);
    const VandermondeMatrix raw = vandermonde_from_signal(x, 2);
    EXPECT_LT(oracle::pole_set_error(z, raw.base.poles), 1e-8);
}

TEST(SolveAmplitudes, ExactSystem)
{
    const std::vector<Complex> z{std::polar(0.95, 0.5), std::polar(0.99, -0.7), std::polar(0.9, 2.5)};
    const VandermondeMatrix v = build_vandermonde({z, 60});
    ComplexVector c(3);
    c << Complex(1.0, 0.5), Complex(-0.2, 0.0), Complex(0.0, 3.0);
    const AmplitudeVector got = solve_amplitudes(v.entries * c, v, 2.0, 0.0);
    EXPECT_LT((got - c).norm(), 1e-10 * c.norm());
}

TEST(SolveAmplitudes, ZeroSignal)
{
    const VandermondeMatrix v = build_vandermonde({{std::polar(0.95, 0.5), std::polar(0.9, -1.0)}, 30});
    EXPECT_EQ(solve_amplitudes(ComplexVector::Zero(30), v, 1.0, 0.1).norm(), 0.0);
    EXPECT_EQ(solve_amplitudes(ComplexVector::Zero(30), v, 1.0, 0.0).norm(), 0.0);
}

TEST(SolveAmplitudes, RidgeLimit)
{
    const ModelSpec m = reference_5peak();
    const Fid x = add_noise(synthesize_fid(m), {0.05, 1});
    const VandermondeMatrix v = vandermonde_from_signal(x, 5);
    const double mu = 2.0;
    const double znorm = v.entries.norm();
    const AmplitudeVector ls = solve_amplitudes(x.samples(), v, mu, 0.0);
    const AmplitudeVector ridge = solve_amplitudes(x.samples(), v, mu, 1e6 * mu * znorm * znorm);
    EXPECT_LT(ridge.norm(), 1e-4 * ls.norm());
}

TEST(SolveAmplitudes, MatchesNormalEquations)
{
    std::mt19937_64 rng(23);
    const VandermondeMatrix v = build_vandermonde({{std::polar(0.97, 0.2), std::polar(0.96, 1.3), std::polar(0.99, -2.0)}, 80});
    const ComplexVector x = oracle::random_vector(rng, 80);
    for (double gamma : {0.0, 1e-3, 0.5, 20.0}) {
        const double mu = 3.0;
        const ComplexMatrix& z = v.entries;
        const ComplexMatrix a = mu * z.adjoint() * z + gamma * ComplexMatrix::Identity(3, 3);
        const ComplexVector want = a.fullPivLu().solve(mu * z.adjoint() * x);
        const AmplitudeVector got = solve_amplitudes(x, v, mu, gamma);
        EXPECT_LT((got - want).norm(), 1e-9 * want.norm()) << "gamma=" << gamma;
    }
}

TEST(SolveAmplitudes, GradientVanishesAtReturn)
{
    std::mt19937_64 rng(24);
    const ModelSpec m = reference_5peak();
    for (int trial = 0; trial < 30; ++trial) {
        const Fid y = add_noise(synthesize_fid(m), {0.02 * (1 + trial % 4), static_cast<std::uint64_t>(trial)});
        const Eigen::Index r = 5 + trial % 6;
        const VandermondeMatrix v = vandermonde_from_signal(y, r);
        for (double gamma : {0.001, 0.01, 0.1, 1.0}) {
            const double mu = trial % 2 ? 10.0 : 0.1;
            const AmplitudeVector c = solve_amplitudes(y.samples(), v, mu, gamma);
            const double scale = gamma * c.norm() + mu * (v.entries.adjoint() * y.samples()).norm();
            EXPECT_LT(amplitude_gradient(y.samples(), v, c, mu, gamma).norm(), 1e-8 * scale)
                << "trial=" << trial << " gamma=" << gamma;
        }
    }
}

TEST(SolveAmplitudes, RankDeficientWithoutRidgeFails)
{
    const VandermondeMatrix dup = build_vandermonde({{std::polar(0.9, 0.5), std::polar(0.9, 0.5)}, 20});
    const ComplexVector x = dup.entries.col(0);
    EXPECT_THROW(solve_amplitudes(x, dup, 1.0, 0.0), NumericalError);
    EXPECT_NO_THROW(solve_amplitudes(x, dup, 1.0, 0.1));
}

TEST(SolveAmplitudes, Validation)
{
    const VandermondeMatrix v = build_vandermonde({{0.5}, 10});
    EXPECT_THROW(solve_amplitudes(ComplexVector::Zero(9), v, 1.0, 0.0), ValidationError);
    EXPECT_THROW(solve_amplitudes(ComplexVector::Zero(10), v, 0.0, 0.0), ValidationError);
    EXPECT_THROW(solve_amplitudes(ComplexVector::Zero(10), v, 1.0, -1.0), ValidationError);
}
