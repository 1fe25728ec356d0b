#include "floqgen/expm.hpp"

#include <cmath>

#include "floqgen/lapack.hpp"

namespace floqgen {

namespace {

// Degree-13 Pade coefficients (Higham 2005).
constexpr double b13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};
constexpr double theta13 = 5.371920351148152;

} // namespace

Mat expm(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("expm: not square");
    if (!kernels::all_finite(m)) throw NumericError("expm: non-finite entries");
    const int n = m.rows();
    if (n == 0) return m;

    const double nrm = kernels::one_norm(m);
    int squarings = 0;
    if (nrm > theta13) squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    Mat a = m;
    if (squarings > 0) kernels::scal(a.size(), std::ldexp(1.0, -squarings), a.data());

    const Mat id = Mat::identity(n);
    Mat a2(n, n), a4(n, n), a6(n, n);
    kernels::gemm(a, a, a2);
    kernels::gemm(a2, a2, a4);
    kernels::gemm(a4, a2, a6);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    Mat w(n, n);
    kernels::add_scaled(w, b13[13], a6);
    kernels::add_scaled(w, b13[11], a4);
    kernels::add_scaled(w, b13[9], a2);
    Mat u(n, n);
    kernels::gemm(a6, w, u);
    kernels::add_scaled(u, b13[7], a6);
    kernels::add_scaled(u, b13[5], a4);
    kernels::add_scaled(u, b13[3], a2);
    kernels::add_scaled(u, b13[1], id);
    Mat au(n, n);
    kernels::gemm(a, u, au);

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    Mat w2(n, n);
    kernels::add_scaled(w2, b13[12], a6);
    kernels::add_scaled(w2, b13[10], a4);
    kernels::add_scaled(w2, b13[8], a2);
    Mat v(n, n);
    kernels::gemm(a6, w2, v);
    kernels::add_scaled(v, b13[6], a6);
    kernels::add_scaled(v, b13[4], a4);
    kernels::add_scaled(v, b13[2], a2);
    kernels::add_scaled(v, b13[0], id);

    // Solve (V - U) R = (V + U).
    Mat lhs = v;
    kernels::add_scaled(lhs, -1.0, au);
    Mat rhs = v;
    kernels::add_scaled(rhs, 1.0, au);
    lapack::lu_solve(lhs, rhs);

    for (int s = 0; s < squarings; ++s) {
        Mat sq(n, n);
        kernels::gemm(rhs, rhs, sq);
        rhs = std::move(sq);
    }
    return rhs;
}

SuperOp superop_expm(const SuperOp& s) { return SuperOp(expm(s.mat()), s.dim()); }

} // namespace floqgen
