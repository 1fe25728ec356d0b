#pragma once

#include <vector>

#include "floqgen/kernels.hpp"
#include "floqgen/mat.hpp"
#include "floqgen/tolerances.hpp"

namespace floqgen {

/// Square operator on the physical Hilbert space.
class Operator {
public:
    Operator() = default;
    explicit Operator(Mat m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw DimensionMismatch("Operator: not square");
    }
    explicit Operator(int dim) : m_(dim, dim) {}

    int dim() const { return m_.rows(); }
    Mat& mat() { return m_; }
    const Mat& mat() const { return m_; }
    cd& operator()(int i, int j) { return m_(i, j); }
    const cd& operator()(int i, int j) const { return m_(i, j); }

    Operator adjoint() const { return Operator(kernels::adjoint(m_)); }
    cd trace() const { return kernels::trace(m_); }

    bool is_hermitian(double tol) const;
    bool is_zero(double tol) const { return kernels::max_abs(m_) <= tol; }

private:
    Mat m_;
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cd s, const Operator& a);

/// A B - B A.
Operator commutator(const Operator& a, const Operator& b);
/// A B + B A.
Operator anticommutator(const Operator& a, const Operator& b);

// Canonical operators.
Operator identity_op(int dim);
Operator zero_op(int dim);
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_plus();   // |up><down|
Operator sigma_minus();  // |down><up|
Operator ladder_a(int dim);
Operator ladder_adag(int dim);
Operator number_op(int dim);
/// n.x*sx + n.y*sy + n.z*sz for a complex 3-vector n.
Operator dot_sigma(cd nx, cd ny, cd nz);

// Column-stacking vectorization. With column-major storage this is the raw
// entry order, so the round trip is exact by construction.
std::vector<cd> vectorize(const Operator& op);
Operator devectorize(const std::vector<cd>& v, int dim);

/// Superoperator: d^2 x d^2 matrix acting on column-stacked operators.
class SuperOp {
public:
    SuperOp() = default;
    SuperOp(Mat m, int phys_dim) : m_(std::move(m)), dim_(phys_dim) {
        if (m_.rows() != m_.cols() || m_.rows() != phys_dim * phys_dim)
            throw DimensionMismatch("SuperOp: shape is not d^2 x d^2");
    }
    static SuperOp zero(int phys_dim) { return SuperOp(Mat(phys_dim * phys_dim, phys_dim * phys_dim), phys_dim); }
    static SuperOp identity(int phys_dim) { return SuperOp(Mat::identity(phys_dim * phys_dim), phys_dim); }

    int dim() const { return dim_; }
    Mat& mat() { return m_; }
    const Mat& mat() const { return m_; }

    Operator apply(const Operator& x) const;

    bool is_trace_annihilating(double tol) const;
    bool is_hermiticity_preserving(double tol) const;
    double trace_annihilation_defect() const;    // max |sum_i S[(i,i),b]|
    double hermiticity_preserving_defect() const; // max |S[a,b] - conj(S[swap a, swap b])|

private:
    Mat m_;
    int dim_ = 0;
};

SuperOp operator+(const SuperOp& a, const SuperOp& b);
SuperOp operator-(const SuperOp& a, const SuperOp& b);
SuperOp operator*(cd s, const SuperOp& a);

/// rho -> -i[h, rho].
SuperOp commutator_superop(const Operator& h);

/// rho -> gamma (2 v rho v^dag - {v^dag v, rho}).
SuperOp dissipator_superop(const Operator& v, double gamma);

/// s1 s2 - s2 s1 (composition commutator).
SuperOp superop_commutator(const SuperOp& s1, const SuperOp& s2);

/// Choi matrix sum_ij E_ij ox S(E_ij); complete positivity of exp(tS) shows
/// up as positivity of the Choi matrix of the exponential.
Mat choi_matrix(const SuperOp& s);

/// Density matrix: Hermitian, unit trace, eigenvalues >= -tol_p.
class DensityMatrix {
public:
    DensityMatrix() = default;
    /// Validates against the global tolerances; negative arguments mean
    /// "use the global default" for positivity / hermiticity / trace.
    explicit DensityMatrix(Operator op, double tol_p = -1.0, double tol_h = -1.0,
                           double tol_tr = -1.0);

    const Operator& op() const { return op_; }
    int dim() const { return op_.dim(); }
    double min_eigenvalue() const;

    /// (rho + rho^dag)/2 then trace-normalize, then validate.
    static DensityMatrix hermitized(const Operator& op, double tol_p = -1.0);

private:
    Operator op_;
};

/// |0><0| in the computational basis (spin-up for dim 2).
DensityMatrix basis_state(int dim, int level = 0);

/// Real expectation value Tr(obs rho) of a Hermitian observable.
double expectation(const Operator& obs, const Operator& rho);

} // namespace floqgen
