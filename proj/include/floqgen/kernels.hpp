#pragma once

#include <span>

#include "floqgen/mat.hpp"

// Dense kernels in two flavours: a plain serial reference and an OpenMP
// version. The unprefixed entry points dispatch on problem size and the
// global parallel switch; tests pin both flavours against each other and
// the benchmark target compares their throughput.

namespace floqgen::kernels {

/// Global switch (default on). Honors FLOQGEN_SERIAL=1 at startup.
bool parallel_enabled();
void set_parallel(bool on);

namespace serial {

// C = alpha*A*B (accumulate=false) or C += alpha*A*B (accumulate=true).
void gemm(const Mat& A, const Mat& B, Mat& C, cd alpha, bool accumulate);

// y = alpha*A*x or y += alpha*A*x.
void gemv(const Mat& A, const cd* x, cd* y, cd alpha, bool accumulate);

// out (+)= alpha * kron(B^T, A); out is (ra*rb) x (ca*cb) with A ra x ca.
void kron_bt_a(const Mat& A, const Mat& B, Mat& out, cd alpha, bool accumulate);

} // namespace serial

namespace par {

void gemm(const Mat& A, const Mat& B, Mat& C, cd alpha, bool accumulate);
void gemv(const Mat& A, const cd* x, cd* y, cd alpha, bool accumulate);
void kron_bt_a(const Mat& A, const Mat& B, Mat& out, cd alpha, bool accumulate);

} // namespace par

// Dispatching entry points.
void gemm(const Mat& A, const Mat& B, Mat& C, cd alpha = 1.0, bool accumulate = false);
void gemv(const Mat& A, const cd* x, cd* y, cd alpha = 1.0, bool accumulate = false);
void kron_bt_a(const Mat& A, const Mat& B, Mat& out, cd alpha = 1.0, bool accumulate = false);

// Small vector helpers (serial; the integrator parallelizes above these).
void axpy(size_t n, cd alpha, const cd* x, cd* y);
void scal(size_t n, cd alpha, cd* x);

// Elementwise matrix helpers.
void add_scaled(Mat& y, cd alpha, const Mat& x); // y += alpha*x
Mat adjoint(const Mat& m);
Mat transpose(const Mat& m);
Mat conj(const Mat& m);
cd trace(const Mat& m);
double max_abs(const Mat& m);
double fro_norm(const Mat& m);
double one_norm(const Mat& m); // max column sum of |.|
bool all_finite(const Mat& m);

// Allocation-accepting conveniences (off the hot paths).
Mat matmul(const Mat& A, const Mat& B);
Mat add(const Mat& A, const Mat& B);
Mat sub(const Mat& A, const Mat& B);
Mat scaled(const Mat& A, cd alpha);

} // namespace floqgen::kernels
