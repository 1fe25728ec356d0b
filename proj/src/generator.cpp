#include "floqgen/generator.hpp"

#include <algorithm>
#include <cmath>

namespace floqgen {

ScalarFn const_fn(cd value) {
    return [value](double) { return value; };
}

void LinearSuperForm::add(FormTerm t) {
    if (t.op.dim() != dim_) throw DimensionMismatch("LinearSuperForm::add: dimension mismatch");
    if (!t.coeff) throw InvalidArgument("LinearSuperForm::add: missing coefficient function");
    terms_.push_back(std::move(t));
}

void LinearSuperForm::apply(double t, const Mat& x, Mat& out, cd scale, bool accumulate) const {
    if (!accumulate) {
        if (!out.same_shape(x)) out = Mat(x.rows(), x.cols());
        std::fill_n(out.data(), out.size(), cd(0.0));
    }
    for (const FormTerm& term : terms_) {
        const cd c = scale * term.coeff(t);
        if (c == cd(0.0)) continue;
        term.op.apply(x, out, c, true);
    }
}

void LinearSuperForm::add_to_superop(double t, Mat& out, cd scale) const {
    for (const FormTerm& term : terms_) {
        const cd c = scale * term.coeff(t);
        if (c == cd(0.0)) continue;
        term.op.add_to_superop(out, c);
    }
}

SuperOp LinearSuperForm::at(double t) const {
    Mat out(dim_ * dim_, dim_ * dim_);
    add_to_superop(t, out, 1.0);
    return SuperOp(std::move(out), dim_);
}

cd LinearSuperForm::coeff_derivative(size_t term, double t, double delta) const {
    const FormTerm& ft = terms_.at(term);
    if (ft.coeff_dot) return ft.coeff_dot(t);
    return (ft.coeff(t + delta) - ft.coeff(t - delta)) / (2.0 * delta);
}

SuperOp LinearSuperForm::derivative_at(double t, double delta) const {
    Mat out(dim_ * dim_, dim_ * dim_);
    for (size_t j = 0; j < terms_.size(); ++j) {
        const cd c = coeff_derivative(j, t, delta);
        if (c == cd(0.0)) continue;
        terms_[j].op.add_to_superop(out, c);
    }
    return SuperOp(std::move(out), dim_);
}

QuasiPeriodicGenerator::QuasiPeriodicGenerator(int dim, std::vector<HarmonicComponent> components,
                                               PhaseProfile phase, double theta0, Window window)
    : dim_(dim), components_(std::move(components)), phase_(std::move(phase)), theta0_(theta0),
      window_(window) {
    std::sort(components_.begin(), components_.end(),
              [](const HarmonicComponent& a, const HarmonicComponent& b) { return a.n < b.n; });
    for (const auto& c : components_) {
        if (c.form.dim() != dim_)
            throw DimensionMismatch("QuasiPeriodicGenerator: component dimension mismatch");
        harmonics_.push_back(c.n);
    }
    for (size_t i = 1; i < harmonics_.size(); ++i)
        if (harmonics_[i] == harmonics_[i - 1])
            throw InvalidArgument("QuasiPeriodicGenerator: duplicate harmonic index");
    for (int n : harmonics_)
        if (!has_component(-n))
            throw InvalidArgument("QuasiPeriodicGenerator: harmonic set not closed under negation");
}

bool QuasiPeriodicGenerator::has_component(int n) const {
    return std::binary_search(harmonics_.begin(), harmonics_.end(), n);
}

const LinearSuperForm& QuasiPeriodicGenerator::component(int n) const {
    const auto it = std::lower_bound(harmonics_.begin(), harmonics_.end(), n);
    if (it == harmonics_.end() || *it != n)
        throw InvalidArgument("QuasiPeriodicGenerator: missing component n=" + std::to_string(n));
    return components_[static_cast<size_t>(it - harmonics_.begin())].form;
}

SuperOp QuasiPeriodicGenerator::eval_at_phase(double theta_val, double t) const {
    Mat out(dim_ * dim_, dim_ * dim_);
    for (const auto& c : components_)
        c.form.add_to_superop(t, out, std::exp(cd(0.0, c.n * theta_val)));
    return SuperOp(std::move(out), dim_);
}

void QuasiPeriodicGenerator::apply_at_phase(double theta_val, double t, const Mat& x,
                                            Mat& out) const {
    bool first = true;
    for (const auto& c : components_) {
        c.form.apply(t, x, out, std::exp(cd(0.0, c.n * theta_val)), !first);
        first = false;
    }
    if (first) { // no components at all
        if (!out.same_shape(x)) out = Mat(x.rows(), x.cols());
        std::fill_n(out.data(), out.size(), cd(0.0));
    }
}

double QuasiPeriodicGenerator::fd_delta(double t) const {
    return std::min(1e-3, 0.01 / phase_.omega(t));
}

SuperOp QuasiPeriodicGenerator::eval_derivative(int n, double t) const {
    return component(n).derivative_at(t, fd_delta(t));
}

Operator LindbladModel::hamiltonian_harmonic(int n, double t) const {
    Operator h(dim);
    const auto it = h_harmonics.find(n);
    if (it == h_harmonics.end()) return h;
    for (const auto& term : it->second) kernels::add_scaled(h.mat(), term.coeff(t), term.op.mat());
    return h;
}

Operator LindbladModel::hamiltonian_harmonic_dot(int n, double t, double delta) const {
    Operator h(dim);
    const auto it = h_harmonics.find(n);
    if (it == h_harmonics.end()) return h;
    for (const auto& term : it->second) {
        const cd c = term.coeff_dot ? term.coeff_dot(t)
                                    : (term.coeff(t + delta) - term.coeff(t - delta)) / (2.0 * delta);
        kernels::add_scaled(h.mat(), c, term.op.mat());
    }
    return h;
}

BuiltGenerator build_lindblad_generator(const LindbladModel& model, PhaseProfile phase,
                                        double theta0, Window window) {
    if (model.dim <= 0) throw InvalidArgument("build_lindblad_generator: bad dimension");
    for (const auto& [v, rate] : model.jumps) {
        if (rate < 0.0) throw InvalidArgument("build_lindblad_generator: negative rate");
        if (v.dim() != model.dim) throw DimensionMismatch("build_lindblad_generator: jump dim");
    }

    // Pairing H^(-n)(t) = H^(n)(t)^dag, sampled over the window.
    for (const auto& [n, terms] : model.h_harmonics) {
        (void)terms;
        for (int i = 0; i <= 8; ++i) {
            const double t =
                window.t_begin + (window.t_end - window.t_begin) * i / 8.0;
            const Operator hn = model.hamiltonian_harmonic(n, t);
            const Operator hmn = model.hamiltonian_harmonic(-n, t);
            if (kernels::max_abs((hn.adjoint() - hmn).mat()) > tolerances().pairing)
                throw InvalidArgument(
                    "build_lindblad_generator: H^(-n) != (H^(n))^dag for n=" + std::to_string(n));
        }
    }

    std::vector<HarmonicComponent> comps;
    for (const auto& [n, terms] : model.h_harmonics) {
        LinearSuperForm form(model.dim);
        for (const auto& term : terms)
            form.add({term.coeff, term.coeff_dot, PairForm::commutator_form(term.op)});
        if (n == 0) {
            for (const auto& [v, rate] : model.jumps) {
                PairForm d = PairForm::dissipator_form(v, rate);
                if (!d.empty()) form.add({const_fn(1.0), const_fn(0.0), std::move(d)});
            }
        }
        comps.push_back({n, std::move(form)});
    }
    if (model.h_harmonics.find(0) == model.h_harmonics.end()) {
        LinearSuperForm form(model.dim);
        for (const auto& [v, rate] : model.jumps) {
            PairForm d = PairForm::dissipator_form(v, rate);
            if (!d.empty()) form.add({const_fn(1.0), const_fn(0.0), std::move(d)});
        }
        comps.push_back({0, std::move(form)});
    }

    BuiltGenerator out{QuasiPeriodicGenerator(model.dim, std::move(comps), std::move(phase), theta0,
                                              window),
                       std::make_shared<LindbladModel>(model)};
    return out;
}

} // namespace floqgen
