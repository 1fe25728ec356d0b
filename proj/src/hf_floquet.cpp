#include "floqgen/hf_floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "floqgen/expm.hpp"
#include "floqgen/steady_state.hpp"

namespace floqgen {

namespace {

using OmegaFn = std::function<double(double)>;

ScalarFn fn_prod(ScalarFn a, ScalarFn b) {
    return [a = std::move(a), b = std::move(b)](double t) { return a(t) * b(t); };
}

ScalarFn fn_prod(ScalarFn a, ScalarFn b, ScalarFn c) {
    return [a = std::move(a), b = std::move(b), c = std::move(c)](double t) {
        return a(t) * b(t) * c(t);
    };
}

ScalarFn fn_scaled(cd s, ScalarFn a) {
    return [s, a = std::move(a)](double t) { return s * a(t); };
}

// coeff(t) / omega(t)^p
ScalarFn fn_over_omega(ScalarFn a, OmegaFn omega, int p) {
    return [a = std::move(a), omega = std::move(omega), p](double t) {
        return a(t) / std::pow(omega(t), p);
    };
}

// Derivative of a term coefficient: analytic when attached, else a central
// difference with the spec'd step delta = min(1e-3, 0.01/omega(t)).
ScalarFn fn_derivative(const FormTerm& term, OmegaFn omega) {
    if (term.coeff_dot) return term.coeff_dot;
    return [f = term.coeff, omega = std::move(omega)](double t) {
        const double d = std::min(1e-3, 0.01 / omega(t));
        return (f(t + d) - f(t - d)) / (2.0 * d);
    };
}

struct WeightedTerm {
    ScalarFn coeff;
    PairForm op;
};

void append_commutator_terms(std::vector<WeightedTerm>& out, const LinearSuperForm& a,
                             const LinearSuperForm& b, const ScalarFn& outer, OmegaFn omega,
                             int omega_power, bool differentiate_b) {
    for (const FormTerm& ta : a.terms()) {
        for (const FormTerm& tb : b.terms()) {
            PairForm fixed = ta.op.commutator_with(tb.op).compressed(tolerances().form_compress);
            if (fixed.empty()) continue;
            ScalarFn cb = differentiate_b ? fn_derivative(tb, omega) : tb.coeff;
            ScalarFn c = fn_prod(outer, fn_prod(ta.coeff, std::move(cb)));
            out.push_back({fn_over_omega(std::move(c), omega, omega_power), std::move(fixed)});
        }
    }
}

void append_double_commutator_terms(std::vector<WeightedTerm>& out, const LinearSuperForm& a,
                                    const LinearSuperForm& b, const LinearSuperForm& c,
                                    const ScalarFn& outer, OmegaFn omega, int omega_power) {
    for (const FormTerm& tb : b.terms()) {
        for (const FormTerm& tc : c.terms()) {
            PairForm inner = tb.op.commutator_with(tc.op).compressed(tolerances().form_compress);
            if (inner.empty()) continue;
            for (const FormTerm& ta : a.terms()) {
                PairForm fixed = ta.op.commutator_with(inner).compressed(tolerances().form_compress);
                if (fixed.empty()) continue;
                ScalarFn cc = fn_prod(outer, fn_prod(ta.coeff, tb.coeff, tc.coeff));
                out.push_back({fn_over_omega(std::move(cc), omega, omega_power), std::move(fixed)});
            }
        }
    }
}

// L_eff(1) = (1/omega) sum_{n != 0} 1/(2 i n) [L^(-n), L^(n)].
std::vector<WeightedTerm> build_leff1(const QuasiPeriodicGenerator& g) {
    std::vector<WeightedTerm> out;
    const OmegaFn omega = g.phase().omega;
    for (int n : g.harmonics()) {
        if (n == 0) continue;
        const ScalarFn pre = const_fn(cd(1.0) / (cd(0.0, 2.0 * n)));
        append_commutator_terms(out, g.component(-n), g.component(n), pre, omega, 1, false);
    }
    return out;
}

// L_eff(2) per the three displayed second-order sums.
std::vector<WeightedTerm> build_leff2(const QuasiPeriodicGenerator& g) {
    std::vector<WeightedTerm> out;
    const OmegaFn omega = g.phase().omega;
    const bool has0 = g.has_component(0);
    for (int n : g.harmonics()) {
        if (n == 0) continue;
        // (1/2n^2) [L^(n), d/dt L^(-n)]
        append_commutator_terms(out, g.component(n), g.component(-n),
                                const_fn(1.0 / (2.0 * n * n)), omega, 2, true);
        // (1/6n^2) [L^(n), [L^(-n), L^(0)]]
        if (has0)
            append_double_commutator_terms(out, g.component(n), g.component(-n), g.component(0),
                                           const_fn(1.0 / (6.0 * n * n)), omega, 2);
    }
    // -(1/3mn) [L^(m), [L^(n), L^(-m-n)]] over m, n != 0; undeclared
    // harmonics contribute zero.
    for (int m : g.harmonics()) {
        if (m == 0) continue;
        for (int n : g.harmonics()) {
            if (n == 0) continue;
            if (!g.has_component(-m - n)) continue;
            append_double_commutator_terms(out, g.component(m), g.component(n),
                                           g.component(-m - n),
                                           const_fn(-1.0 / (3.0 * m * n)), omega, 2);
        }
    }
    return out;
}

struct OmegaTerm {
    int n = 0;
    ScalarFn coeff;
    PairForm op;
};

// Omega_(1)^(n) = (-i / (omega n)) L^(n).
void build_omega1(const QuasiPeriodicGenerator& g, std::vector<OmegaTerm>& out) {
    const OmegaFn omega = g.phase().omega;
    for (int n : g.harmonics()) {
        if (n == 0) continue;
        for (const FormTerm& t : g.component(n).terms()) {
            PairForm fixed = t.op.compressed(tolerances().form_compress);
            if (fixed.empty()) continue;
            out.push_back({n, fn_over_omega(fn_scaled(cd(0.0, -1.0 / n), t.coeff), omega, 1),
                           std::move(fixed)});
        }
    }
}

// Omega_(2)^(n) = (-1/omega^2) { (1/2n^2)[L^(0), L^(n)]
//   + sum_{m != 0} (1/2mn)[L^(n-m), L^(m)]
//   - (1/n^2)[d/dt L^(n) - (omega_dot/omega) L^(n)] }.
void build_omega2(const QuasiPeriodicGenerator& g, std::vector<OmegaTerm>& out) {
    const OmegaFn omega = g.phase().omega;
    const OmegaFn omega_dot = g.phase().omega_dot;
    for (int n : g.harmonics()) {
        if (n == 0) continue;
        std::vector<WeightedTerm> acc;
        if (g.has_component(0))
            append_commutator_terms(acc, g.component(0), g.component(n),
                                    const_fn(-1.0 / (2.0 * n * n)), omega, 2, false);
        for (int m : g.harmonics()) {
            if (m == 0) continue;
            if (!g.has_component(n - m)) continue;
            append_commutator_terms(acc, g.component(n - m), g.component(m),
                                    const_fn(-1.0 / (2.0 * m * n)), omega, 2, false);
        }
        for (const FormTerm& t : g.component(n).terms()) {
            PairForm fixed = t.op.compressed(tolerances().form_compress);
            if (fixed.empty()) continue;
            // +(1/n^2 omega^2) d/dt coeff
            acc.push_back({fn_over_omega(fn_scaled(1.0 / (n * n), fn_derivative(t, omega)), omega, 2),
                           fixed});
            // -(omega_dot / (n^2 omega^3)) coeff
            ScalarFn chirp = [c = t.coeff, omega, omega_dot, n](double tt) {
                const double w = omega(tt);
                return -omega_dot(tt) / (n * n * w * w * w) * c(tt);
            };
            acc.push_back({std::move(chirp), std::move(fixed)});
        }
        for (auto& w : acc) out.push_back({n, std::move(w.coeff), std::move(w.op)});
    }
}

SuperOp densify(const std::vector<WeightedTerm>& terms, int dim, double t) {
    Mat out(dim * dim, dim * dim);
    for (const auto& w : terms) {
        const cd c = w.coeff(t);
        if (c == cd(0.0)) continue;
        w.op.add_to_superop(out, c);
    }
    return SuperOp(std::move(out), dim);
}

// Deterministic sample times spread over the window (offset avoids hitting
// zeros of periodic coefficients systematically).
std::vector<double> window_samples(const Window& w, int count) {
    std::vector<double> ts(count);
    for (int i = 0; i < count; ++i)
        ts[i] = w.t_begin + (w.t_end - w.t_begin) * (i + 0.382) / count;
    return ts;
}

} // namespace

SuperOp leff_order1_term(const QuasiPeriodicGenerator& g, double t) {
    return densify(build_leff1(g), g.dim(), t);
}

SuperOp leff_order2_term(const QuasiPeriodicGenerator& g, double t) {
    return densify(build_leff2(g), g.dim(), t);
}

SuperOp leff_lindblad_specialized(const LindbladModel& model, const PhaseProfile& phase,
                                  double t) {
    for (const auto& [n, terms] : model.h_harmonics) {
        (void)terms;
        if (n < -1 || n > 1)
            throw ShapeMismatch("leff_lindblad_specialized: harmonics outside {-1,0,1}");
    }
    if (model.jumps.size() > 1)
        throw ShapeMismatch("leff_lindblad_specialized: more than one jump channel");
    const int d = model.dim;
    const double w = phase.omega(t);
    const double delta = std::min(1e-3, 0.01 / w);

    const Operator h0 = model.hamiltonian_harmonic(0, t);
    const Operator hp = model.hamiltonian_harmonic(1, t);
    const Operator hm = model.hamiltonian_harmonic(-1, t);
    const Operator hp_dot = model.hamiltonian_harmonic_dot(1, t, delta);
    const Operator hm_dot = model.hamiltonian_harmonic_dot(-1, t, delta);

    auto plain_comm = [d](const Operator& a) { // [A, .]
        PairForm f(d);
        f.add_left(a.mat());
        f.add_right(a.mat(), -1.0);
        return f;
    };
    auto anti = [d](const Operator& a) { // {A, .}
        PairForm f(d);
        f.add_left(a.mat());
        f.add_right(a.mat());
        return f;
    };

    Mat acc(d * d, d * d);
    // L_eff(1) = (1/(i omega)) [[H^(1), H^(-1)], .]
    plain_comm(commutator(hp, hm)).add_to_superop(acc, cd(1.0) / cd(0.0, w));

    const cd pre = 1.0 / (2.0 * w * w);
    Operator xm = zero_op(d), xp = zero_op(d);
    double gamma = 0.0;
    if (!model.jumps.empty()) {
        xm = model.jumps.front().first;
        xp = xm.adjoint();
        gamma = model.jumps.front().second;
    }
    const Operator xpxm = xp * xm;
    const struct {
        const Operator &hn, &hmn, &hmn_dot;
    } pairs[2] = {{hp, hm, hm_dot}, {hm, hp, hp_dot}};
    for (const auto& p : pairs) {
        plain_comm(commutator(p.hmn_dot, p.hn)).add_to_superop(acc, pre);
        plain_comm(commutator(p.hn, commutator(p.hmn, h0))).add_to_superop(acc, pre * cd(0.0, 1.0));
        if (gamma > 0.0) {
            const cd gpre = pre * gamma;
            anti(commutator(p.hn, commutator(p.hmn, xpxm))).add_to_superop(acc, gpre);
            PairForm sandwich1(d);
            sandwich1.add_term(commutator(p.hn, xm).mat(), commutator(xp, p.hmn).mat());
            sandwich1.add_to_superop(acc, 2.0 * gpre);
            PairForm sandwich2(d);
            sandwich2.add_term(commutator(p.hmn, xm).mat(), commutator(xp, p.hn).mat());
            sandwich2.add_to_superop(acc, 2.0 * gpre);
            PairForm left(d);
            left.add_term(commutator(p.hn, commutator(xm, p.hmn)).mat(), xp.mat());
            left.add_to_superop(acc, 2.0 * gpre);
            PairForm right(d);
            right.add_term(xm.mat(), commutator(p.hn, commutator(xp, p.hmn)).mat());
            right.add_to_superop(acc, 2.0 * gpre);
        }
    }
    return SuperOp(std::move(acc), d);
}

std::map<int, SuperOp> omega_components(const QuasiPeriodicGenerator& g, double t, int order) {
    if (order < 1 || order > 2) throw InvalidArgument("omega_components: order must be 1 or 2");
    std::vector<OmegaTerm> terms;
    build_omega1(g, terms);
    if (order >= 2) build_omega2(g, terms);
    std::map<int, SuperOp> out;
    const int d = g.dim();
    for (int n : g.harmonics())
        if (n != 0) out.emplace(n, SuperOp::zero(d));
    for (const auto& w : terms) {
        const cd c = w.coeff(t);
        if (c == cd(0.0)) continue;
        w.op.add_to_superop(out.at(w.n).mat(), c);
    }
    return out;
}

SuperOp micromotion_superop(const QuasiPeriodicGenerator& g, double t, double theta_val,
                            int order) {
    return MicroMotionGenerator(g, order).micromotion(t, theta_val);
}

EffectiveGenerator::EffectiveGenerator(const QuasiPeriodicGenerator& g, int order)
    : dim_(g.dim()), order_(ExpansionOrder(order).k), source_(&g) {
    if (order_ == 0) return;
    std::vector<WeightedTerm> raw = build_leff1(g);
    if (order_ >= 2) {
        auto second = build_leff2(g);
        for (auto& t : second) raw.push_back(std::move(t));
    }
    if (raw.empty()) return;

    // Group terms whose coefficient functions are proportional on the
    // window, sum their fixed parts, and drop groups that cancel. This is
    // what reduces e.g. a vanishing correction series to nothing instead of
    // a long list of mutually cancelling commutators evaluated every step.
    const Window& win = g.window();
    if (!(win.t_end > win.t_begin))
        throw InvalidArgument("EffectiveGenerator: generator window not set");
    const auto ts = window_samples(win, 48);
    const size_t nterm = raw.size(), ns = ts.size();
    std::vector<std::vector<cd>> samples(nterm, std::vector<cd>(ns));
    std::vector<double> scale(nterm, 0.0);
    for (size_t i = 0; i < nterm; ++i) {
        for (size_t s = 0; s < ns; ++s) {
            samples[i][s] = raw[i].coeff(ts[s]);
            scale[i] = std::max(scale[i], std::abs(samples[i][s]));
        }
    }
    std::vector<bool> used(nterm, false);
    for (size_t i = 0; i < nterm; ++i) {
        if (used[i]) continue;
        used[i] = true;
        if (scale[i] == 0.0) continue; // coefficient vanishes on the window
        PairForm sum = raw[i].op;
        for (size_t j = i + 1; j < nterm; ++j) {
            if (used[j] || scale[j] == 0.0) continue;
            cd num = 0.0;
            double den = 0.0;
            for (size_t s = 0; s < ns; ++s) {
                num += samples[j][s] * std::conj(samples[i][s]);
                den += std::norm(samples[i][s]);
            }
            const cd lambda = num / den;
            double resid = 0.0;
            for (size_t s = 0; s < ns; ++s)
                resid = std::max(resid, std::abs(samples[j][s] - lambda * samples[i][s]));
            if (resid <= 1e-10 * scale[j]) {
                used[j] = true;
                sum = sum.plus(raw[j].op, lambda);
            }
        }
        PairForm compressed = sum.compressed(tolerances().term_drop);
        if (compressed.empty()) continue;
        corrections_.push_back({raw[i].coeff, std::move(compressed)});
    }
}

SuperOp EffectiveGenerator::eval(double t) const {
    Mat out(dim_ * dim_, dim_ * dim_);
    if (source_->has_component(0)) source_->component(0).add_to_superop(t, out, 1.0);
    for (const auto& w : corrections_) {
        const cd c = w.coeff(t);
        if (c == cd(0.0)) continue;
        w.op.add_to_superop(out, c);
    }
    return SuperOp(std::move(out), dim_);
}

SuperOp EffectiveGenerator::corrections(double t) const {
    Mat out(dim_ * dim_, dim_ * dim_);
    for (const auto& w : corrections_) {
        const cd c = w.coeff(t);
        if (c == cd(0.0)) continue;
        w.op.add_to_superop(out, c);
    }
    return SuperOp(std::move(out), dim_);
}

void EffectiveGenerator::apply(double t, const Mat& x, Mat& out) const {
    if (!out.same_shape(x)) out = Mat(x.rows(), x.cols());
    std::fill_n(out.data(), out.size(), cd(0.0));
    if (source_->has_component(0)) source_->component(0).apply(t, x, out, 1.0, true);
    for (const auto& w : corrections_) {
        const cd c = w.coeff(t);
        if (c == cd(0.0)) continue;
        w.op.apply(x, out, c, true);
    }
}

MicroMotionGenerator::MicroMotionGenerator(const QuasiPeriodicGenerator& g, int order)
    : dim_(g.dim()), order_(order), source_(&g) {
    if (order < 1 || order > 2) throw InvalidArgument("MicroMotionGenerator: order must be 1 or 2");
    std::vector<OmegaTerm> terms;
    build_omega1(g, terms);
    if (order >= 2) build_omega2(g, terms);
    for (auto& t : terms) terms_.push_back({t.n, std::move(t.coeff), std::move(t.op)});
}

SuperOp MicroMotionGenerator::component(int n, double t) const {
    Mat out(dim_ * dim_, dim_ * dim_);
    for (const auto& w : terms_) {
        if (w.n != n) continue;
        const cd c = w.coeff(t);
        if (c == cd(0.0)) continue;
        w.op.add_to_superop(out, c);
    }
    return SuperOp(std::move(out), dim_);
}

SuperOp MicroMotionGenerator::exponent(double t, double theta_val) const {
    Mat out(dim_ * dim_, dim_ * dim_);
    for (const auto& w : terms_) {
        const cd c = w.coeff(t) * std::exp(cd(0.0, w.n * theta_val));
        if (c == cd(0.0)) continue;
        w.op.add_to_superop(out, c);
    }
    return SuperOp(std::move(out), dim_);
}

SuperOp MicroMotionGenerator::micromotion(double t, double theta_val) const {
    return superop_expm(exponent(t, theta_val));
}

SuperOp MicroMotionGenerator::micromotion_inverse(double t, double theta_val) const {
    // D = exp(Omega), so the inverse is exp(-Omega) exactly.
    return superop_expm(cd(-1.0) * exponent(t, theta_val));
}

DensityMatrix instantaneous_steady_state(const EffectiveGenerator& eg, double t) {
    return null_steady_state(eg.eval(t));
}

double effective_step_bound(const QuasiPeriodicGenerator& g, const IntegratorConfig& cfg) {
    double h = cfg.max_step > 0.0 ? cfg.max_step : std::numeric_limits<double>::infinity();
    for (double tau : g.slow_timescales)
        if (tau > 0.0) h = std::min(h, 0.01 * tau);
    for (double delta : g.slow_detunings)
        if (delta != 0.0) h = std::min(h, 2.0 * M_PI / (40.0 * std::abs(delta)));
    if (!std::isfinite(h)) {
        // No declared slow scales: fall back to a fine fraction of the window.
        h = (g.window().t_end - g.window().t_begin) / 1000.0;
    }
    return h;
}

Trajectory propagate_effective(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                               const IntegratorConfig& cfg, int order, bool with_micromotion,
                               int micromotion_order) {
    if (cfg.t_grid.size() < 2) throw InvalidArgument("propagate_effective: need output grid");
    for (size_t i = 1; i < cfg.t_grid.size(); ++i)
        if (cfg.t_grid[i] <= cfg.t_grid[i - 1])
            throw InvalidArgument("propagate_effective: grid not increasing");
    if (rho0.dim() != g.dim()) throw DimensionMismatch("propagate_effective: state dimension");

    const EffectiveGenerator eff(g, order);
    const double h_bound = effective_step_bound(g, cfg);

    Mat y = rho0.op().mat();
    std::unique_ptr<MicroMotionGenerator> mm;
    if (with_micromotion) {
        mm = std::make_unique<MicroMotionGenerator>(g, micromotion_order);
        const SuperOp dinv0 = mm->micromotion_inverse(0.0, g.theta0());
        Mat seeded(y.rows(), y.cols());
        kernels::gemv(dinv0.mat(), y.data(), seeded.data(), 1.0, false);
        y = std::move(seeded);
        if (!kernels::all_finite(y))
            throw NumericError("propagate_effective: micro-motion inversion not finite");
    }

    const int d = g.dim();
    Mat k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    std::vector<Mat> raw;
    raw.reserve(cfg.t_grid.size());
    raw.push_back(y);
    for (size_t seg = 0; seg + 1 < cfg.t_grid.size(); ++seg) {
        const double ta = cfg.t_grid[seg], tb = cfg.t_grid[seg + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((tb - ta) / h_bound - 1e-12)));
        const double h = (tb - ta) / n;
        for (int s = 0; s < n; ++s) {
            const double t = ta + s * h;
            eff.apply(t, y, k1);
            tmp = y;
            kernels::axpy(tmp.size(), 0.5 * h, k1.data(), tmp.data());
            eff.apply(t + 0.5 * h, tmp, k2);
            tmp = y;
            kernels::axpy(tmp.size(), 0.5 * h, k2.data(), tmp.data());
            eff.apply(t + 0.5 * h, tmp, k3);
            tmp = y;
            kernels::axpy(tmp.size(), h, k3.data(), tmp.data());
            eff.apply(t + h, tmp, k4);
            kernels::axpy(y.size(), h / 6.0, k1.data(), y.data());
            kernels::axpy(y.size(), h / 3.0, k2.data(), y.data());
            kernels::axpy(y.size(), h / 3.0, k3.data(), y.data());
            kernels::axpy(y.size(), h / 6.0, k4.data(), y.data());
        }
        raw.push_back(y);
    }

    std::vector<Operator> out(raw.size(), Operator(d));
    if (with_micromotion) {
        // Micro-motion dressing at output times; independent per time.
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < raw.size(); ++i) {
            const double t = cfg.t_grid[i];
            const SuperOp dmat = mm->micromotion(t, g.theta0() + g.phase().phi(t));
            kernels::gemv(dmat.mat(), raw[i].data(), out[i].mat().data(), 1.0, false);
        }
    } else {
        for (size_t i = 0; i < raw.size(); ++i) out[i] = Operator(std::move(raw[i]));
    }
    return Trajectory(cfg.t_grid, std::move(out),
                      with_micromotion ? MethodTag::effective_micromotion : MethodTag::effective,
                      order);
}

} // namespace floqgen
