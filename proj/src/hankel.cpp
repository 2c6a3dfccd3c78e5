#include "chordv/hankel.hpp"

#include "chordv/errors.hpp"

#include <string>

namespace chordv {

namespace {

void require_dims(const ComplexMatrix& m, const HankelShape& shape, const char* op)
{
    shape.validate();
    if (m.rows() != shape.p || m.cols() != shape.q)
        throw ValidationError(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", shape expects " + std::to_string(shape.p) +
                              "x" + std::to_string(shape.q));
}

} // namespace

HankelShape HankelShape::for_length(Eigen::Index n)
{
    if (n < 1)
        throw ValidationError("Hankel shape needs a positive length");
    const Eigen::Index q = (n % 2 == 1) ? (n + 1) / 2 : n / 2;
    return with_columns(n, q);
}

HankelShape HankelShape::with_columns(Eigen::Index n, Eigen::Index q)
{
    HankelShape shape{n, n - q + 1, q};
    shape.validate();
    return shape;
}

void HankelShape::validate() const
{
    if (n < 1 || p < 1 || q < 1 || p + q - 1 != n)
        throw ValidationError("invalid Hankel shape N=" + std::to_string(n) + " P=" + std::to_string(p) +
                              " Q=" + std::to_string(q));
}

ComplexMatrix hankelize(const ComplexVector& x, const HankelShape& shape)
{
    shape.validate();
    if (x.size() != shape.n)
        throw ValidationError("hankelize: signal length " + std::to_string(x.size()) +
                              " does not match shape N=" + std::to_string(shape.n));
    ComplexMatrix h(shape.p, shape.q);
    for (Eigen::Index col = 0; col < shape.q; ++col)
        h.col(col) = x.segment(col, shape.p);
    return h;
}

ComplexMatrix hankelize(const Fid& x)
{
    return hankelize(x.samples(), HankelShape::for_length(x.size()));
}

ComplexVector dehankelize_sum(const ComplexMatrix& m, const HankelShape& shape)
{
    require_dims(m, shape, "dehankelize_sum");
    ComplexVector out = ComplexVector::Zero(shape.n);
    for (Eigen::Index col = 0; col < shape.q; ++col)
        out.segment(col, shape.p) += m.col(col);
    return out;
}

ComplexVector dehankelize_avg(const ComplexMatrix& m, const HankelShape& shape)
{
    require_dims(m, shape, "dehankelize_avg");
    // running mean: exact when the anti-diagonal is constant
    ComplexVector out = ComplexVector::Zero(shape.n);
    std::vector<double> count(static_cast<std::size_t>(shape.n), 0.0);
    for (Eigen::Index q = 0; q < shape.q; ++q)
        for (Eigen::Index p = 0; p < shape.p; ++p) {
            const Eigen::Index k = p + q;
            double& c = count[static_cast<std::size_t>(k)];
            c += 1.0;
            out[k] += (m(p, q) - out[k]) / c;
        }
    return out;
}

std::vector<Eigen::Index> antidiag_weights(const HankelShape& shape)
{
    shape.validate();
    std::vector<Eigen::Index> w(static_cast<std::size_t>(shape.n));
    for (Eigen::Index k = 0; k < shape.n; ++k)
        w[static_cast<std::size_t>(k)] = std::min({k + 1, shape.p, shape.q, shape.n - k});
    return w;
}

Eigen::VectorXd antidiag_weights_real(const HankelShape& shape)
{
    const auto w = antidiag_weights(shape);
    Eigen::VectorXd out(shape.n);
    for (Eigen::Index k = 0; k < shape.n; ++k)
        out[k] = static_cast<double>(w[static_cast<std::size_t>(k)]);
    return out;
}

RankTruncation truncate_rank(const ComplexMatrix& m, Eigen::Index r)
{
    const Eigen::Index k = std::min(m.rows(), m.cols());
    if (r < 1 || r > k)
        throw ValidationError("truncate_rank: rank " + std::to_string(r) + " outside [1, " +
                              std::to_string(k) + "]");
    auto svd = linalg::thin_svd(m);
    RankTruncation out;
    out.left_basis = svd.u.leftCols(r);
    out.truncated = out.left_basis * svd.s.head(r).asDiagonal() * svd.vh.topRows(r);
    out.singular_values = std::move(svd.s);
    return out;
}

ComplexMatrix soft_threshold_svd(const ComplexMatrix& m, double a)
{
    if (!(a >= 0.0))
        throw ValidationError("soft_threshold_svd: threshold must be >= 0");
    const auto svd = linalg::thin_svd(m);
    Eigen::Index kept = 0;
    while (kept < svd.s.size() && svd.s[kept] > a)
        ++kept;
    if (kept == 0)
        return ComplexMatrix::Zero(m.rows(), m.cols());
    const Eigen::VectorXd shrunk = svd.s.head(kept).array() - a;
    return svd.u.leftCols(kept) * shrunk.asDiagonal() * svd.vh.topRows(kept);
}

} // namespace chordv
