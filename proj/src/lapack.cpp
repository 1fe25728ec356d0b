#include "floqgen/lapack.hpp"

#include <algorithm>

#include <lapacke.h>

#include "floqgen/errors.hpp"

namespace floqgen::lapack {

namespace {
lapack_complex_double* lp(cd* p) { return reinterpret_cast<lapack_complex_double*>(p); }
} // namespace

void lu_solve(Mat& A, Mat& B) {
    if (A.rows() != A.cols() || A.rows() != B.rows())
        throw DimensionMismatch("lu_solve: shape mismatch");
    const int n = A.rows(), nrhs = B.cols();
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, nrhs, lp(A.data()), n,
                                          ipiv.data(), lp(B.data()), n);
    if (info != 0) throw NumericError("zgesv failed, info=" + std::to_string(info));
}

SvdResult svd(const Mat& m) {
    Mat a = m;
    const int rows = m.rows(), cols = m.cols();
    const int k = std::min(rows, cols);
    SvdResult r;
    r.u = Mat(rows, k);
    r.vh = Mat(k, cols);
    r.s.resize(k);
    std::vector<double> superb(std::max(1, k - 1));
    const lapack_int info =
        LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', rows, cols, lp(a.data()), rows, r.s.data(),
                       lp(r.u.data()), rows, lp(r.vh.data()), k, superb.data());
    if (info != 0) throw NumericError("zgesvd failed, info=" + std::to_string(info));
    return r;
}

std::vector<double> hermitian_eigenvalues(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_eigenvalues: not square");
    Mat a = m;
    const int n = m.rows();
    std::vector<double> w(n);
    const lapack_int info =
        LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', n, lp(a.data()), n, w.data());
    if (info != 0) throw NumericError("zheev failed, info=" + std::to_string(info));
    return w;
}

} // namespace floqgen::lapack
