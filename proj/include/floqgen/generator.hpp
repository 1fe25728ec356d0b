#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "floqgen/pair_form.hpp"
#include "floqgen/phase.hpp"

namespace floqgen {

using ScalarFn = std::function<cd(double)>;

ScalarFn const_fn(cd value);

/// One scalar-weighted fixed superoperator: coeff(t) * op. Fixing the
/// operator part and keeping all slow time dependence in scalars is what
/// lets the high-frequency expansion precompute its commutator structure
/// once and the integrators run on d x d products.
struct FormTerm {
    ScalarFn coeff;
    ScalarFn coeff_dot; // null: differentiate coeff by central differences
    PairForm op;
};

/// sum_j coeff_j(t) * op_j.
class LinearSuperForm {
public:
    LinearSuperForm() = default;
    explicit LinearSuperForm(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    const std::vector<FormTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    void add(FormTerm t);

    /// out (+)= scale * sum_j coeff_j(t) op_j (x).
    void apply(double t, const Mat& x, Mat& out, cd scale = 1.0, bool accumulate = false) const;
    SuperOp at(double t) const;
    void add_to_superop(double t, Mat& out, cd scale = 1.0) const;

    /// d/dt of the form at t; per-term analytic coefficient derivative when
    /// attached, else a central difference with step delta on the scalar
    /// coefficient (identical to differencing the assembled matrix, since
    /// the operator parts are constant).
    SuperOp derivative_at(double t, double delta) const;
    cd coeff_derivative(size_t term, double t, double delta) const;

private:
    int dim_ = 0;
    std::vector<FormTerm> terms_;
};

struct HarmonicComponent {
    int n = 0;
    LinearSuperForm form;
};

struct Window {
    double t_begin = 0.0;
    double t_end = 0.0;
};

/// L(t) = sum_n Ltilde^(n)(t) e^{i n (theta0 + phi(t))}: a finite set of
/// Fourier components with slow time dependence plus the fast-phase
/// machinery. Components outside the declared set are zero.
class QuasiPeriodicGenerator {
public:
    QuasiPeriodicGenerator() = default;
    QuasiPeriodicGenerator(int dim, std::vector<HarmonicComponent> components, PhaseProfile phase,
                           double theta0, Window window);

    int dim() const { return dim_; }
    double theta0() const { return theta0_; }
    const PhaseProfile& phase() const { return phase_; }
    const Window& window() const { return window_; }

    const std::vector<int>& harmonics() const { return harmonics_; }
    bool has_component(int n) const;
    const LinearSuperForm& component(int n) const;

    /// Assembled Ltilde(theta_val, t) = sum_n Ltilde^(n)(t) e^{i n theta_val}.
    SuperOp eval_at_phase(double theta_val, double t) const;
    void apply_at_phase(double theta_val, double t, const Mat& x, Mat& out) const;

    /// d/dt Ltilde^(n)(t); throws on a missing component.
    SuperOp eval_derivative(int n, double t) const;
    /// Spec'd step: delta = min(1e-3, 0.01 / omega_eff(t)).
    double fd_delta(double t) const;

    // Metadata used to bound the effective-propagation step.
    std::vector<double> slow_timescales;
    std::vector<double> slow_detunings;

private:
    int dim_ = 0;
    std::vector<HarmonicComponent> components_;
    std::vector<int> harmonics_;
    PhaseProfile phase_;
    double theta0_ = 0.0;
    Window window_;
};

/// A restricted Lindblad family: H(t) = sum_n H^(n)(t) e^{i n phase} with
/// static jump operators. Kept alongside the generator so the specialized
/// second-order formula can be evaluated on the same model.
struct HamiltonianTerm {
    ScalarFn coeff;
    ScalarFn coeff_dot; // may be null
    Operator op;
};

struct LindbladModel {
    int dim = 0;
    std::map<int, std::vector<HamiltonianTerm>> h_harmonics;
    std::vector<std::pair<Operator, double>> jumps;

    Operator hamiltonian_harmonic(int n, double t) const;
    Operator hamiltonian_harmonic_dot(int n, double t, double delta) const;
};

struct BuiltGenerator {
    QuasiPeriodicGenerator generator;
    std::shared_ptr<const LindbladModel> model;
};

/// Assemble the quasi-periodic Lindblad generator: component 0 carries the
/// H^(0) commutator plus all dissipators, components n != 0 the pure
/// commutator parts. Validates rate signs and the pairing
/// H^(-n)(t) = H^(n)(t)^dag at sampled times.
BuiltGenerator build_lindblad_generator(const LindbladModel& model, PhaseProfile phase,
                                        double theta0, Window window);

} // namespace floqgen
