#pragma once

#include <vector>

#include "floqgen/mat.hpp"

// Thin LAPACKE wrappers for the factorizations this library does not roll
// itself: LU solves (Pade denominator), SVD (Liouvillian kernels, pair-form
// compression) and Hermitian eigenvalues (positivity checks).

namespace floqgen::lapack {

/// Solve A X = B in place of B (A overwritten by its LU factors).
void lu_solve(Mat& A, Mat& B);

struct SvdResult {
    Mat u;                    // m x k
    std::vector<double> s;    // k singular values, descending
    Mat vh;                   // k x n (conjugate-transposed right vectors)
};

/// Economy-size SVD of a copy of m.
SvdResult svd(const Mat& m);

/// Eigenvalues of a Hermitian matrix, ascending. Uses the lower triangle.
std::vector<double> hermitian_eigenvalues(const Mat& m);

} // namespace floqgen::lapack
