#include "floqgen/pair_form.hpp"

#include <cmath>
#include <cstring>

#include "floqgen/lapack.hpp"

namespace floqgen {

namespace {

bool is_identity(const Mat& m) {
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (m(i, j) != (i == j ? cd(1.0) : cd(0.0))) return false;
    return true;
}

} // namespace

void PairForm::add_term(Mat left, Mat right) {
    if (left.rows() != dim_ || left.cols() != dim_ || right.rows() != dim_ || right.cols() != dim_)
        throw DimensionMismatch("PairForm::add_term: shape mismatch");
    Term t;
    t.left_id = is_identity(left);
    t.right_id = is_identity(right);
    t.left = std::move(left);
    t.right = std::move(right);
    terms_.push_back(std::move(t));
}

void PairForm::add_left(Mat left, cd scale) {
    kernels::scal(left.size(), scale, left.data());
    add_term(std::move(left), Mat::identity(dim_));
}

void PairForm::add_right(Mat right, cd scale) {
    kernels::scal(right.size(), scale, right.data());
    add_term(Mat::identity(dim_), std::move(right));
}

void PairForm::apply(const Mat& x, Mat& out, cd scale, bool accumulate) const {
    if (!accumulate) {
        if (!out.same_shape(x)) out = Mat(x.rows(), x.cols());
        std::fill_n(out.data(), out.size(), cd(0.0));
    }
    thread_local Mat tmp;
    for (const Term& t : terms_) {
        if (t.left_id && t.right_id) {
            kernels::axpy(x.size(), scale, x.data(), out.data());
        } else if (t.right_id) {
            kernels::gemm(t.left, x, out, scale, true);
        } else if (t.left_id) {
            kernels::gemm(x, t.right, out, scale, true);
        } else {
            if (!tmp.same_shape(x)) tmp = Mat(x.rows(), x.cols());
            kernels::gemm(t.left, x, tmp, 1.0, false);
            kernels::gemm(tmp, t.right, out, scale, true);
        }
    }
}

Operator PairForm::apply(const Operator& x) const {
    Operator out(dim_);
    apply(x.mat(), out.mat(), 1.0, false);
    return out;
}

void PairForm::add_to_superop(Mat& out, cd scale) const {
    for (const Term& t : terms_) kernels::kron_bt_a(t.left, t.right, out, scale, true);
}

SuperOp PairForm::to_superop() const {
    Mat out(dim_ * dim_, dim_ * dim_);
    add_to_superop(out, 1.0);
    return SuperOp(std::move(out), dim_);
}

PairForm PairForm::scaled(cd s) const {
    PairForm r(dim_);
    for (const Term& t : terms_) {
        Mat l = t.left;
        kernels::scal(l.size(), s, l.data());
        r.add_term(std::move(l), t.right);
    }
    return r;
}

PairForm PairForm::plus(const PairForm& other, cd other_scale) const {
    if (other.dim_ != dim_) throw DimensionMismatch("PairForm::plus: dimension mismatch");
    PairForm r = *this;
    for (const Term& t : other.terms_) {
        Mat l = t.left;
        kernels::scal(l.size(), other_scale, l.data());
        r.add_term(std::move(l), t.right);
    }
    return r;
}

PairForm PairForm::compose(const PairForm& other) const {
    if (other.dim_ != dim_) throw DimensionMismatch("PairForm::compose: dimension mismatch");
    PairForm r(dim_);
    for (const Term& a : terms_)
        for (const Term& b : other.terms_)
            r.add_term(kernels::matmul(a.left, b.left), kernels::matmul(b.right, a.right));
    return r;
}

PairForm PairForm::commutator_with(const PairForm& other) const {
    return compose(other).plus(other.compose(*this), -1.0);
}

PairForm PairForm::compressed(double rel_tol) const {
    if (terms_.empty()) return *this;
    const int d = dim_, d2 = d * d;
    const int k = static_cast<int>(terms_.size());

    // Overall magnitude of the input terms; the final cutoff is relative to
    // this so a sum that cancels to zero actually compresses to rank 0.
    double scale = 0.0;
    for (const Term& t : terms_) scale += kernels::fro_norm(t.left) * kernels::fro_norm(t.right);
    if (scale == 0.0) return PairForm(d);

    // Pass 1: orthogonalize the left factors. Stack vec(A_k) as columns,
    // SVD, and push the mixing weights into new right factors.
    Mat stack(d2, k);
    for (int c = 0; c < k; ++c)
        std::memcpy(stack.col(c), terms_[c].left.data(), d2 * sizeof(cd));
    auto svd1 = lapack::svd(stack);
    const double smax1 = svd1.s.empty() ? 0.0 : svd1.s[0];
    std::vector<Term> pass1;
    for (size_t r = 0; r < svd1.s.size(); ++r) {
        if (svd1.s[r] <= rel_tol * smax1) break;
        Mat left(d, d);
        std::memcpy(left.data(), svd1.u.col(static_cast<int>(r)), d2 * sizeof(cd));
        Mat right(d, d);
        for (int c = 0; c < k; ++c) {
            const cd w = svd1.s[r] * svd1.vh(static_cast<int>(r), c);
            if (w == cd(0.0)) continue;
            kernels::add_scaled(right, w, terms_[c].right);
        }
        Term t;
        t.left = std::move(left);
        t.right = std::move(right);
        pass1.push_back(std::move(t));
    }
    if (pass1.empty()) return PairForm(d);

    // Pass 2: same on the right factors; drops terms whose right side
    // cancelled to zero in pass 1.
    const int k2 = static_cast<int>(pass1.size());
    Mat stack2(d2, k2);
    for (int c = 0; c < k2; ++c)
        std::memcpy(stack2.col(c), pass1[c].right.data(), d2 * sizeof(cd));
    auto svd2 = lapack::svd(stack2);
    // Pass-1 left factors are orthonormal, so pass-2 singular values carry
    // the magnitude of the whole map; cut against the input scale.
    PairForm out(d);
    for (size_t r = 0; r < svd2.s.size(); ++r) {
        if (svd2.s[r] <= rel_tol * scale) break;
        Mat right(d, d);
        std::memcpy(right.data(), svd2.u.col(static_cast<int>(r)), d2 * sizeof(cd));
        Mat left(d, d);
        for (int c = 0; c < k2; ++c) {
            const cd w = svd2.s[r] * svd2.vh(static_cast<int>(r), c);
            if (w == cd(0.0)) continue;
            kernels::add_scaled(left, w, pass1[c].left);
        }
        out.add_term(std::move(left), std::move(right));
    }
    return out;
}

PairForm PairForm::commutator_form(const Operator& h) {
    PairForm f(h.dim());
    f.add_left(h.mat(), cd(0, -1));
    f.add_right(h.mat(), cd(0, 1));
    return f;
}

PairForm PairForm::dissipator_form(const Operator& v, double gamma) {
    if (gamma < 0.0) throw InvalidArgument("dissipator_form: negative rate");
    PairForm f(v.dim());
    if (gamma == 0.0 || v.is_zero(0.0)) return f;
    const Operator vdag = v.adjoint();
    const Operator vdv = vdag * v;
    f.add_term(kernels::scaled(v.mat(), 2.0 * gamma), vdag.mat());
    f.add_left(vdv.mat(), -gamma);
    f.add_right(vdv.mat(), -gamma);
    return f;
}

} // namespace floqgen
