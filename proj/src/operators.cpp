#include "floqgen/operators.hpp"

#include <cmath>
#include <cstring>

#include "floqgen/lapack.hpp"

namespace floqgen {

using kernels::add_scaled;

bool Operator::is_hermitian(double tol) const {
    for (int j = 0; j < dim(); ++j)
        for (int i = 0; i <= j; ++i)
            if (std::abs(m_(i, j) - std::conj(m_(j, i))) > tol) return false;
    return true;
}

Operator operator+(const Operator& a, const Operator& b) {
    Operator r = a;
    add_scaled(r.mat(), 1.0, b.mat());
    return r;
}

Operator operator-(const Operator& a, const Operator& b) {
    Operator r = a;
    add_scaled(r.mat(), -1.0, b.mat());
    return r;
}

Operator operator*(const Operator& a, const Operator& b) {
    return Operator(kernels::matmul(a.mat(), b.mat()));
}

Operator operator*(cd s, const Operator& a) { return Operator(kernels::scaled(a.mat(), s)); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

Operator identity_op(int dim) { return Operator(Mat::identity(dim)); }
Operator zero_op(int dim) { return Operator(Mat(dim, dim)); }

Operator sigma_x() {
    Operator s(2);
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    return s;
}

Operator sigma_y() {
    Operator s(2);
    s(0, 1) = cd(0, -1);
    s(1, 0) = cd(0, 1);
    return s;
}

Operator sigma_z() {
    Operator s(2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

Operator sigma_plus() {
    Operator s(2);
    s(0, 1) = 1.0; // |up><down|, up = level 0
    return s;
}

Operator sigma_minus() {
    Operator s(2);
    s(1, 0) = 1.0;
    return s;
}

Operator ladder_a(int dim) {
    Operator a(dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Operator ladder_adag(int dim) { return ladder_a(dim).adjoint(); }

Operator number_op(int dim) {
    Operator n(dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Operator dot_sigma(cd nx, cd ny, cd nz) {
    Operator s(2);
    s(0, 0) = nz;
    s(1, 1) = -nz;
    s(0, 1) = nx - cd(0, 1) * ny;
    s(1, 0) = nx + cd(0, 1) * ny;
    return s;
}

std::vector<cd> vectorize(const Operator& op) {
    const size_t n = op.mat().size();
    std::vector<cd> v(n);
    std::memcpy(v.data(), op.mat().data(), n * sizeof(cd));
    return v;
}

Operator devectorize(const std::vector<cd>& v, int dim) {
    if (v.size() != static_cast<size_t>(dim) * dim)
        throw DimensionMismatch("devectorize: length is not dim^2");
    Mat m(dim, dim);
    std::memcpy(m.data(), v.data(), v.size() * sizeof(cd));
    return Operator(std::move(m));
}

Operator SuperOp::apply(const Operator& x) const {
    if (x.dim() != dim_) throw DimensionMismatch("SuperOp::apply: dimension mismatch");
    Operator out(dim_);
    kernels::gemv(m_, x.mat().data(), out.mat().data(), 1.0, false);
    return out;
}

double SuperOp::trace_annihilation_defect() const {
    // Tr(S X) = 0 for all X iff every column's diagonal-position entries sum
    // to zero: sum_i S[(i,i), b] = 0.
    const int d = dim_, d2 = d * d;
    double worst = 0.0;
    for (int b = 0; b < d2; ++b) {
        cd s = 0.0;
        const cd* c = m_.col(b);
        for (int i = 0; i < d; ++i) s += c[i * d + i];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

bool SuperOp::is_trace_annihilating(double tol) const {
    return trace_annihilation_defect() <= tol;
}

double SuperOp::hermiticity_preserving_defect() const {
    // S(X^dag) = (S X)^dag for all X iff S[(i,j),(k,l)] = conj(S[(j,i),(l,k)]).
    const int d = dim_;
    auto swp = [d](int a) { return (a % d) * d + a / d; };
    const int d2 = d * d;
    double worst = 0.0;
    for (int b = 0; b < d2; ++b)
        for (int a = 0; a < d2; ++a)
            worst = std::max(worst, std::abs(m_(a, b) - std::conj(m_(swp(a), swp(b)))));
    return worst;
}

bool SuperOp::is_hermiticity_preserving(double tol) const {
    return hermiticity_preserving_defect() <= tol;
}

SuperOp operator+(const SuperOp& a, const SuperOp& b) {
    SuperOp r = a;
    add_scaled(r.mat(), 1.0, b.mat());
    return r;
}

SuperOp operator-(const SuperOp& a, const SuperOp& b) {
    SuperOp r = a;
    add_scaled(r.mat(), -1.0, b.mat());
    return r;
}

SuperOp operator*(cd s, const SuperOp& a) { return SuperOp(kernels::scaled(a.mat(), s), a.dim()); }

SuperOp commutator_superop(const Operator& h) {
    // -i[h, rho] = (-i h) rho I + I rho (i h): kron(I, -i h) + kron((i h)^T, I).
    const int d = h.dim();
    Mat out(d * d, d * d);
    const Mat id = Mat::identity(d);
    kernels::kron_bt_a(kernels::scaled(h.mat(), cd(0, -1)), id, out, 1.0, false);
    kernels::kron_bt_a(id, kernels::scaled(h.mat(), cd(0, 1)), out, 1.0, true);
    return SuperOp(std::move(out), d);
}

SuperOp dissipator_superop(const Operator& v, double gamma) {
    if (gamma < 0.0) throw InvalidArgument("dissipator_superop: negative rate");
    const int d = v.dim();
    Mat out(d * d, d * d);
    const Mat id = Mat::identity(d);
    const Operator vdag = v.adjoint();
    const Operator vdv = vdag * v;
    kernels::kron_bt_a(kernels::scaled(v.mat(), 2.0 * gamma), vdag.mat(), out, 1.0, false);
    kernels::kron_bt_a(kernels::scaled(vdv.mat(), -gamma), id, out, 1.0, true);
    kernels::kron_bt_a(id, kernels::scaled(vdv.mat(), -gamma), out, 1.0, true);
    return SuperOp(std::move(out), d);
}

SuperOp superop_commutator(const SuperOp& s1, const SuperOp& s2) {
    if (s1.dim() != s2.dim()) throw DimensionMismatch("superop_commutator: dimension mismatch");
    Mat out(s1.mat().rows(), s1.mat().cols());
    kernels::gemm(s1.mat(), s2.mat(), out, 1.0, false);
    kernels::gemm(s2.mat(), s1.mat(), out, -1.0, true);
    return SuperOp(std::move(out), s1.dim());
}

Mat choi_matrix(const SuperOp& s) {
    const int d = s.dim();
    Mat choi(d * d, d * d);
    Operator e(d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            e(i, j) = 1.0;
            const Operator out = s.apply(e);
            e(i, j) = 0.0;
            // Block (i,j) of the Choi matrix is S(E_ij).
            for (int l = 0; l < d; ++l)
                for (int k = 0; k < d; ++k) choi(i * d + k, j * d + l) = out(k, l);
        }
    }
    return choi;
}

DensityMatrix::DensityMatrix(Operator op, double tol_p, double tol_h, double tol_tr)
    : op_(std::move(op)) {
    const Tolerances& tol = tolerances();
    const double tp = tol_p < 0.0 ? tol.positivity : tol_p;
    const double th = tol_h < 0.0 ? tol.hermiticity : tol_h;
    const double tt = tol_tr < 0.0 ? tol.trace : tol_tr;
    double herm = 0.0;
    for (int j = 0; j < op_.dim(); ++j)
        for (int i = 0; i < op_.dim(); ++i)
            herm = std::max(herm, std::abs(op_(i, j) - std::conj(op_(j, i))));
    if (herm > th)
        throw StateInvariantViolation("DensityMatrix: hermiticity defect " + std::to_string(herm));
    const double tr_err = std::abs(op_.trace() - cd(1.0));
    if (tr_err > tt)
        throw StateInvariantViolation("DensityMatrix: trace defect " + std::to_string(tr_err));
    const double mineig = min_eigenvalue();
    if (mineig < -tp)
        throw StateInvariantViolation("DensityMatrix: negative eigenvalue " + std::to_string(mineig));
}

double DensityMatrix::min_eigenvalue() const {
    // Hermitize first; zheev reads only one triangle anyway.
    Mat h(op_.dim(), op_.dim());
    for (int j = 0; j < op_.dim(); ++j)
        for (int i = 0; i < op_.dim(); ++i)
            h(i, j) = 0.5 * (op_(i, j) + std::conj(op_(j, i)));
    return lapack::hermitian_eigenvalues(h).front();
}

DensityMatrix DensityMatrix::hermitized(const Operator& op, double tol_p) {
    const int d = op.dim();
    Operator h(d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) h(i, j) = 0.5 * (op(i, j) + std::conj(op(j, i)));
    const cd tr = h.trace();
    if (std::abs(tr) < 1e-14) throw NonNormalizable("hermitized: zero trace");
    return DensityMatrix(cd(1.0) / tr * h, tol_p);
}

DensityMatrix basis_state(int dim, int level) {
    if (level < 0 || level >= dim) throw InvalidArgument("basis_state: level out of range");
    Operator r(dim);
    r(level, level) = 1.0;
    return DensityMatrix(std::move(r));
}

double expectation(const Operator& obs, const Operator& rho) {
    if (obs.dim() != rho.dim()) throw DimensionMismatch("expectation: dimension mismatch");
    cd s = 0.0;
    for (int j = 0; j < obs.dim(); ++j)
        for (int i = 0; i < obs.dim(); ++i) s += obs(i, j) * rho(j, i);
    return s.real();
}

} // namespace floqgen
