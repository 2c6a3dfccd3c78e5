#pragma once

#include <Eigen/Dense>

namespace chordv {

/// Dense complex matrix, column-major (Eigen default).
using ComplexMatrix = Eigen::MatrixXcd;

namespace linalg {

/// A = u * diag(s) * vh with s non-increasing. u is m x k, vh is k x n,
/// k = min(m, n).
struct ThinSvd {
    ComplexMatrix u;
    Eigen::VectorXd s;
    ComplexMatrix vh;
};

/// LAPACK zgesdd. Throws NumericalError on non-finite input or when the
/// divide-and-conquer iteration fails to converge.
ThinSvd thin_svd(const ComplexMatrix& a);

Eigen::VectorXd singular_values(const ComplexMatrix& a);

/// Pins the BLAS backend to one thread so results do not depend on how
/// many worker threads the caller runs.
void use_single_threaded_kernels() noexcept;

} // namespace linalg
} // namespace chordv
