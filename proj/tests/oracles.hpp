#pragma once

// Reference computations written independently of the library: plain loops,
// std::exp per term and Eigen's Jacobi SVD instead of LAPACK.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline Mat hankel(const Vec& x, Eigen::Index q)
{
    const Eigen::Index p = x.size() - q + 1;
    Mat h(p, q);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < q; ++j) h(i, j) = x[i + j];
    return h;
}

inline Vec dft(const Vec& x)
{
    const auto n = x.size();
    Vec out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        cd acc = 0.0;
        for (Eigen::Index t = 0; t < n; ++t)
            acc += x[t] * std::exp(cd(0.0, -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) /
                                             static_cast<double>(n)));
        out[k] = acc;
    }
    return out;
}

inline Eigen::VectorXd singular_values(const Mat& m)
{
    return Eigen::JacobiSVD<Mat>(m).singularValues();
}

inline Eigen::Index numerical_rank(const Mat& m, double rel)
{
    const auto s = singular_values(m);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > rel * s[0]) ++r;
    return r;
}

inline Vec exponential_sum(const std::vector<cd>& amps, const std::vector<cd>& poles, Eigen::Index n)
{
    Vec x = Vec::Zero(n);
    for (std::size_t r = 0; r < poles.size(); ++r)
        for (Eigen::Index t = 0; t < n; ++t) x[t] += amps[r] * std::pow(poles[r], static_cast<double>(t));
    return x;
}

// Largest nearest-neighbour distance after greedy matching of each
// expected pole to a distinct estimate.
inline double pole_set_error(std::vector<cd> expected, std::vector<cd> estimated)
{
    double worst = 0.0;
    for (const cd& z : expected) {
        auto best = std::min_element(estimated.begin(), estimated.end(),
                                     [&](const cd& a, const cd& b) { return std::abs(a - z) < std::abs(b - z); });
        if (best == estimated.end()) return INFINITY;
        worst = std::max(worst, std::abs(*best - z));
        estimated.erase(best);
    }
    return worst;
}

inline Vec random_vector(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    Vec v(n);
    for (auto& e : v) e = cd(g(rng), g(rng));
    return v;
}

inline Mat random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c)
{
    std::normal_distribution<double> g;
    Mat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cd(g(rng), g(rng));
    return m;
}

inline Mat random_unitary(std::mt19937_64& rng, Eigen::Index n)
{
    Eigen::HouseholderQR<Mat> qr(random_matrix(rng, n, n));
    return qr.householderQ() * Mat::Identity(n, n);
}

inline double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

} // namespace oracle
