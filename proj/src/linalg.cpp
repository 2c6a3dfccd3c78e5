#include "chordv/linalg.hpp"

#include "chordv/errors.hpp"

#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace chordv::linalg {

namespace {

lapack_int checked_dim(Eigen::Index v)
{
    return static_cast<lapack_int>(v);
}

} // namespace

ThinSvd thin_svd(const ComplexMatrix& a)
{
    if (a.rows() == 0 || a.cols() == 0)
        throw ValidationError("thin_svd: empty matrix");
    if (!a.allFinite())
        throw NumericalError("thin_svd: matrix has non-finite entries");

    const lapack_int m = checked_dim(a.rows());
    const lapack_int n = checked_dim(a.cols());
    const lapack_int k = std::min(m, n);

    ComplexMatrix work = a; // zgesdd destroys its input
    ThinSvd out;
    out.u.resize(m, k);
    out.s.resize(k);
    out.vh.resize(k, n);

    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, out.s.data(),
                                           out.u.data(), m, out.vh.data(), k);
    if (info != 0)
        throw NumericalError("zgesdd failed with info = " + std::to_string(info));
    return out;
}

Eigen::VectorXd singular_values(const ComplexMatrix& a)
{
    if (a.rows() == 0 || a.cols() == 0)
        throw ValidationError("singular_values: empty matrix");
    if (!a.allFinite())
        throw NumericalError("singular_values: matrix has non-finite entries");

    const lapack_int m = checked_dim(a.rows());
    const lapack_int n = checked_dim(a.cols());
    ComplexMatrix work = a;
    Eigen::VectorXd s(std::min(m, n));
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("zgesdd failed with info = " + std::to_string(info));
    return s;
}

void use_single_threaded_kernels() noexcept
{
    openblas_set_num_threads(1);
}

} // namespace chordv::linalg
