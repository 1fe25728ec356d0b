#pragma once

#include <vector>

#include "floqgen/operators.hpp"

namespace floqgen {

/// Superoperator in left/right multiplication form: rho -> sum_k A_k rho B_k.
/// Structured generators stay in this form so the integrators work with
/// d x d products instead of d^2 x d^2 matrices; to_superop() is the dense
/// reference route and the two are tested against each other.
class PairForm {
public:
    struct Term {
        Mat left;
        Mat right;
        bool left_id = false;  // skip the left product
        bool right_id = false; // skip the right product
    };

    PairForm() = default;
    explicit PairForm(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    bool empty() const { return terms_.empty(); }
    size_t rank() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    void add_term(Mat left, Mat right);
    /// rho -> c * (A rho) i.e. right factor identity.
    void add_left(Mat left, cd scale = 1.0);
    /// rho -> (rho B).
    void add_right(Mat right, cd scale = 1.0);

    /// out (+)= scale * sum_k A_k x B_k.
    void apply(const Mat& x, Mat& out, cd scale = 1.0, bool accumulate = false) const;
    Operator apply(const Operator& x) const;

    SuperOp to_superop() const;
    void add_to_superop(Mat& out, cd scale = 1.0) const; // accumulate kron terms

    PairForm scaled(cd s) const;
    PairForm plus(const PairForm& other, cd other_scale = 1.0) const;
    /// Composition: this after other (this(other(rho))).
    PairForm compose(const PairForm& other) const;
    /// this.compose(other) - other.compose(this).
    PairForm commutator_with(const PairForm& other) const;

    /// Rank reduction via two one-sided SVD passes on the stacked left and
    /// right factors; terms whose factors fall below rel_tol * leading
    /// singular value are dropped. Exact up to the cutoff.
    PairForm compressed(double rel_tol) const;

    /// -i[h, rho].
    static PairForm commutator_form(const Operator& h);
    /// gamma (2 v rho v^dag - {v^dag v, rho}).
    static PairForm dissipator_form(const Operator& v, double gamma);

private:
    int dim_ = 0;
    std::vector<Term> terms_;
};

} // namespace floqgen
