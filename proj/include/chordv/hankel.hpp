#pragma once

#include "chordv/linalg.hpp"
#include "chordv/signal_model.hpp"

#include <vector>

namespace chordv {

/// Geometry of the P x Q Hankel embedding of a length-N signal,
/// P + Q - 1 = N.
struct HankelShape {
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    Eigen::Index q = 0;

    /// Q = (N + 1) / 2 for odd N and N / 2 for even N.
    static HankelShape for_length(Eigen::Index n);
    /// Explicit column count, for experimenting with non-square embeddings.
    static HankelShape with_columns(Eigen::Index n, Eigen::Index q);

    Eigen::Index min_dim() const noexcept { return std::min(p, q); }
    void validate() const;

    bool operator==(const HankelShape&) const = default;
};

/// Entry (p, q) = x[p + q].
ComplexMatrix hankelize(const ComplexVector& x, const HankelShape& shape);
ComplexMatrix hankelize(const Fid& x);

/// Exact adjoint of hankelize: entry n is the sum of the n-th anti-diagonal.
ComplexVector dehankelize_sum(const ComplexMatrix& m, const HankelShape& shape);

/// Anti-diagonal means; a left inverse of hankelize.
ComplexVector dehankelize_avg(const ComplexMatrix& m, const HankelShape& shape);

/// w_n = min(n + 1, P, Q, N - n): the number of Hankel entries holding x[n].
std::vector<Eigen::Index> antidiag_weights(const HankelShape& shape);
Eigen::VectorXd antidiag_weights_real(const HankelShape& shape);

struct RankTruncation {
    ComplexMatrix truncated;   // U_r Sigma_r V_r^H
    ComplexMatrix left_basis;  // U_r, P x r with orthonormal columns
    Eigen::VectorXd singular_values; // all of them, non-increasing
};

/// Best rank-r approximation. Requires 1 <= r <= min(rows, cols).
RankTruncation truncate_rank(const ComplexMatrix& m, Eigen::Index r);

/// U diag(max(s_j - a, 0)) V^H, the proximal map of a * nuclear norm.
ComplexMatrix soft_threshold_svd(const ComplexMatrix& m, double a);

} // namespace chordv
