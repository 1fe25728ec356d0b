#include "floqgen/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace floqgen::kernels {

namespace {

std::atomic<bool> g_parallel{[] {
    const char* env = std::getenv("FLOQGEN_SERIAL");
    return !(env && env[0] == '1');
}()};

// Work thresholds below which threading is pure overhead.
constexpr size_t kGemmFlopCutoff = 1u << 16;
constexpr size_t kGemvFlopCutoff = 1u << 16;
constexpr size_t kKronFlopCutoff = 1u << 16;

void check_gemm(const Mat& A, const Mat& B, const Mat& C) {
    if (A.cols() != B.rows() || A.rows() != C.rows() || B.cols() != C.cols())
        throw DimensionMismatch("gemm: incompatible shapes");
}

} // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

namespace serial {

void gemm(const Mat& A, const Mat& B, Mat& C, cd alpha, bool accumulate) {
    check_gemm(A, B, C);
    const int m = A.rows(), k = A.cols(), n = B.cols();
    for (int j = 0; j < n; ++j) {
        cd* cj = C.col(j);
        if (!accumulate)
            for (int i = 0; i < m; ++i) cj[i] = 0.0;
        const cd* bj = B.col(j);
        for (int l = 0; l < k; ++l) {
            const cd blj = alpha * bj[l];
            if (blj == cd(0.0)) continue;
            const cd* al = A.col(l);
            for (int i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
}

void gemv(const Mat& A, const cd* x, cd* y, cd alpha, bool accumulate) {
    const int m = A.rows(), n = A.cols();
    if (!accumulate)
        for (int i = 0; i < m; ++i) y[i] = 0.0;
    for (int j = 0; j < n; ++j) {
        const cd xj = alpha * x[j];
        if (xj == cd(0.0)) continue;
        const cd* aj = A.col(j);
        for (int i = 0; i < m; ++i) y[i] += aj[i] * xj;
    }
}

void kron_bt_a(const Mat& A, const Mat& B, Mat& out, cd alpha, bool accumulate) {
    // kron(B^T, A)[(jb*ra+ia), (ib*ca+ja)] = B(ib,jb) * A(ia,ja):
    // this is the matrix of rho -> A rho B under column stacking.
    const int ra = A.rows(), ca = A.cols(), rb = B.rows(), cb = B.cols();
    if (out.rows() != rb * ra || out.cols() != cb * ca)
        throw DimensionMismatch("kron_bt_a: bad output shape");
    for (int ib = 0; ib < rb; ++ib) {
        for (int ja = 0; ja < ca; ++ja) {
            cd* ocol = out.col(ib * ca + ja);
            if (!accumulate && ib == 0 && ja == 0) {
                // nothing; handled per column below
            }
            for (int jb = 0; jb < cb; ++jb) {
                const cd b = alpha * B(ib, jb);
                cd* oc = ocol + static_cast<size_t>(jb) * ra;
                const cd* ac = A.col(ja);
                if (!accumulate) {
                    for (int ia = 0; ia < ra; ++ia) oc[ia] = ac[ia] * b;
                } else {
                    for (int ia = 0; ia < ra; ++ia) oc[ia] += ac[ia] * b;
                }
            }
        }
    }
}

} // namespace serial

namespace par {

void gemm(const Mat& A, const Mat& B, Mat& C, cd alpha, bool accumulate) {
    check_gemm(A, B, C);
    const int m = A.rows(), k = A.cols(), n = B.cols();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        cd* cj = C.col(j);
        if (!accumulate)
            for (int i = 0; i < m; ++i) cj[i] = 0.0;
        const cd* bj = B.col(j);
        for (int l = 0; l < k; ++l) {
            const cd blj = alpha * bj[l];
            if (blj == cd(0.0)) continue;
            const cd* al = A.col(l);
            for (int i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
}

void gemv(const Mat& A, const cd* x, cd* y, cd alpha, bool accumulate) {
    const int m = A.rows(), n = A.cols();
    // Row blocks: each thread owns a contiguous row range over all columns,
    // so per-element accumulation order matches the serial kernel exactly.
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (int i = 0; i < m; ++i) {
            cd acc = accumulate ? y[i] : cd(0.0);
            const cd* a = A.data() + i;
            for (int j = 0; j < n; ++j) acc += a[static_cast<size_t>(j) * m] * (alpha * x[j]);
            y[i] = acc;
        }
    }
}

void kron_bt_a(const Mat& A, const Mat& B, Mat& out, cd alpha, bool accumulate) {
    const int ra = A.rows(), ca = A.cols(), rb = B.rows(), cb = B.cols();
    if (out.rows() != rb * ra || out.cols() != cb * ca)
        throw DimensionMismatch("kron_bt_a: bad output shape");
    // Column layout of the output is (ib*ca + ja); parallelize over it directly.
#pragma omp parallel for schedule(static) collapse(2)
    for (int ib = 0; ib < rb; ++ib) {
        for (int ja = 0; ja < ca; ++ja) {
            cd* ocol = out.col(ib * ca + ja);
            const cd* ac = A.col(ja);
            for (int jb = 0; jb < cb; ++jb) {
                const cd b = alpha * B(ib, jb);
                cd* oc = ocol + static_cast<size_t>(jb) * ra;
                if (!accumulate) {
                    for (int ia = 0; ia < ra; ++ia) oc[ia] = ac[ia] * b;
                } else {
                    for (int ia = 0; ia < ra; ++ia) oc[ia] += ac[ia] * b;
                }
            }
        }
    }
}

} // namespace par

void gemm(const Mat& A, const Mat& B, Mat& C, cd alpha, bool accumulate) {
    const size_t work = static_cast<size_t>(A.rows()) * A.cols() * B.cols();
    if (parallel_enabled() && work >= kGemmFlopCutoff)
        par::gemm(A, B, C, alpha, accumulate);
    else
        serial::gemm(A, B, C, alpha, accumulate);
}

void gemv(const Mat& A, const cd* x, cd* y, cd alpha, bool accumulate) {
    const size_t work = static_cast<size_t>(A.rows()) * A.cols();
    if (parallel_enabled() && work >= kGemvFlopCutoff)
        par::gemv(A, x, y, alpha, accumulate);
    else
        serial::gemv(A, x, y, alpha, accumulate);
}

void kron_bt_a(const Mat& A, const Mat& B, Mat& out, cd alpha, bool accumulate) {
    const size_t work = out.size();
    if (parallel_enabled() && work >= kKronFlopCutoff)
        par::kron_bt_a(A, B, out, alpha, accumulate);
    else
        serial::kron_bt_a(A, B, out, alpha, accumulate);
}

void axpy(size_t n, cd alpha, const cd* x, cd* y) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal(size_t n, cd alpha, cd* x) {
    for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void add_scaled(Mat& y, cd alpha, const Mat& x) {
    if (!y.same_shape(x)) throw DimensionMismatch("add_scaled: shape mismatch");
    axpy(y.size(), alpha, x.data(), y.data());
}

Mat adjoint(const Mat& m) {
    Mat r(m.cols(), m.rows());
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i) r(j, i) = std::conj(m(i, j));
    return r;
}

Mat transpose(const Mat& m) {
    Mat r(m.cols(), m.rows());
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i) r(j, i) = m(i, j);
    return r;
}

Mat conj(const Mat& m) {
    Mat r(m.rows(), m.cols());
    for (size_t i = 0; i < m.size(); ++i) r.data()[i] = std::conj(m.data()[i]);
    return r;
}

cd trace(const Mat& m) {
    cd t = 0.0;
    const int n = std::min(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) t += m(i, i);
    return t;
}

double max_abs(const Mat& m) {
    double v = 0.0;
    for (size_t i = 0; i < m.size(); ++i) v = std::max(v, std::abs(m.data()[i]));
    return v;
}

double fro_norm(const Mat& m) {
    double s = 0.0;
    for (size_t i = 0; i < m.size(); ++i) s += std::norm(m.data()[i]);
    return std::sqrt(s);
}

double one_norm(const Mat& m) {
    double v = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        const cd* c = m.col(j);
        for (int i = 0; i < m.rows(); ++i) s += std::abs(c[i]);
        v = std::max(v, s);
    }
    return v;
}

bool all_finite(const Mat& m) {
    for (size_t i = 0; i < m.size(); ++i) {
        const cd z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

Mat matmul(const Mat& A, const Mat& B) {
    Mat C(A.rows(), B.cols());
    gemm(A, B, C, 1.0, false);
    return C;
}

Mat add(const Mat& A, const Mat& B) {
    Mat C = A;
    add_scaled(C, 1.0, B);
    return C;
}

Mat sub(const Mat& A, const Mat& B) {
    Mat C = A;
    add_scaled(C, -1.0, B);
    return C;
}

Mat scaled(const Mat& A, cd alpha) {
    Mat C = A;
    scal(C.size(), alpha, C.data());
    return C;
}

} // namespace floqgen::kernels
