#include "floqgen/scenarios.hpp"

#include <cmath>

#include "floqgen/steady_state.hpp"

namespace floqgen {

namespace {

using Vec3 = std::array<cd, 3>;

Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

Vec3 conj(const Vec3& u) { return {std::conj(u[0]), std::conj(u[1]), std::conj(u[2])}; }

Vec3 scale(cd s, const Vec3& u) { return {s * u[0], s * u[1], s * u[2]}; }

Operator vec_dot_sigma(const Vec3& v) { return dot_sigma(v[0], v[1], v[2]); }

// [A, .] without the -i factor (the closed forms carry their own phases).
PairForm plain_comm(const Operator& a) {
    PairForm f(a.dim());
    f.add_left(a.mat());
    f.add_right(a.mat(), -1.0);
    return f;
}

PairForm plain_anti(const Operator& a) {
    PairForm f(a.dim());
    f.add_left(a.mat());
    f.add_right(a.mat());
    return f;
}

} // namespace

PhaseProfile RampSpec::to_phase() const {
    switch (kind) {
    case RampKind::constant: return constant_phase(w_i);
    case RampKind::tanh_ramp: return tanh_ramp_phase(w_i, w_f, t0, tau);
    case RampKind::sinusoid: return sinusoid_phase(w_i, w_f, tau);
    }
    throw InvalidArgument("RampSpec: bad kind");
}

double RampSpec::omega_min() const {
    return kind == RampKind::constant ? w_i : std::min(w_i, w_f);
}

double RampSpec::omega_max() const {
    return kind == RampKind::constant ? w_i : std::max(w_i, w_f);
}

double RampSpec::timescale() const { return kind == RampKind::constant ? 0.0 : tau; }

BuiltGenerator build_spin_scenario(const SpinScenarioParams& p) {
    if (p.alpha <= 0.0 || p.gamma <= 0.0) throw InvalidArgument("spin scenario: alpha, gamma > 0");
    if (p.omega_c < 0.0) throw InvalidArgument("spin scenario: omega_c >= 0");
    if (p.t_end <= 0.0) throw InvalidArgument("spin scenario: t_end > 0 required");

    LindbladModel model;
    model.dim = 2;
    model.jumps.emplace_back(sigma_minus(), p.gamma);

    const double a = p.alpha;
    if (p.variant == SpinVariant::fast_rotation) {
        // B = (1/2)[0, 1, -i]: H^(1) = alpha B.sigma, constant in t.
        const Operator h1 = vec_dot_sigma({0.0, 0.5 * a, cd(0.0, -0.5) * a});
        model.h_harmonics[1] = {{const_fn(1.0), const_fn(0.0), h1}};
        model.h_harmonics[-1] = {{const_fn(1.0), const_fn(0.0), h1.adjoint()}};
    } else {
        // B = (1/2)[0, cos wc t, sin wc t] (real): H^(+-1) = alpha B.sigma.
        const double wc = p.omega_c;
        const ScalarFn cy = [a, wc](double t) { return cd(0.5 * a * std::cos(wc * t)); };
        const ScalarFn cy_dot = [a, wc](double t) { return cd(-0.5 * a * wc * std::sin(wc * t)); };
        const ScalarFn cz = [a, wc](double t) { return cd(0.5 * a * std::sin(wc * t)); };
        const ScalarFn cz_dot = [a, wc](double t) { return cd(0.5 * a * wc * std::cos(wc * t)); };
        const std::vector<HamiltonianTerm> terms = {{cy, cy_dot, sigma_y()},
                                                    {cz, cz_dot, sigma_z()}};
        model.h_harmonics[1] = terms;
        model.h_harmonics[-1] = terms;
    }

    BuiltGenerator built = build_lindblad_generator(model, p.ramp.to_phase(), p.theta0,
                                                    Window{0.0, p.t_end});
    built.generator.slow_timescales.push_back(1.0 / p.gamma);
    if (p.ramp.timescale() > 0.0) built.generator.slow_timescales.push_back(p.ramp.timescale());
    if (p.omega_c > 0.0) built.generator.slow_timescales.push_back(1.0 / p.omega_c);
    return built;
}

SuperOp spin_reference_leff(const SpinScenarioParams& p, double t, int order) {
    const PhaseProfile phase = p.ramp.to_phase();
    const double w = phase.omega(t);
    const double a = p.alpha, g = p.gamma;

    Vec3 b, b_dot;
    if (p.variant == SpinVariant::fast_rotation) {
        b = {0.0, 0.5, cd(0.0, -0.5)};
        b_dot = {0.0, 0.0, 0.0};
    } else {
        const double wc = p.omega_c;
        b = {0.0, 0.5 * std::cos(wc * t), 0.5 * std::sin(wc * t)};
        b_dot = {0.0, -0.5 * wc * std::sin(wc * t), 0.5 * wc * std::cos(wc * t)};
    }

    const int d = 2;
    Mat acc(d * d, d * d);
    if (order == 1) {
        // [ (2 alpha^2 / omega) (B x B*).sigma, . ]
        const Vec3 v = scale(2.0 * a * a / w, cross(b, conj(b)));
        plain_comm(vec_dot_sigma(v)).add_to_superop(acc, 1.0);
        return SuperOp(std::move(acc), d);
    }
    if (order != 2) throw InvalidArgument("spin_reference_leff: order must be 1 or 2");

    const Vec3 ep = {0.5, cd(0.0, 0.5), 0.0};  // (ex + i ey)/2
    const Vec3 em = {0.5, cd(0.0, -0.5), 0.0}; // (ex - i ey)/2
    const cd pre = a * a / (2.0 * w * w);

    // One orientation of the displayed sum; called for (B,B*) and (B*,B).
    auto half = [&](const Vec3& B, const Vec3& Bs, const Vec3& Bs_dot) {
        // B0 = 0 in both variants, so the first bracket drops.
        plain_comm(vec_dot_sigma(scale(cd(0.0, 2.0), cross(Bs_dot, B)))).add_to_superop(acc, pre);
        const cd gp = -4.0 * g * pre;
        plain_anti(vec_dot_sigma(scale(cd(0.0, 1.0), cross(B, cross(Bs, cross(ep, em))))))
            .add_to_superop(acc, gp);
        PairForm sw(d);
        sw.add_term(vec_dot_sigma(cross(B, em)).mat(), vec_dot_sigma(cross(ep, Bs)).mat());
        sw.add_to_superop(acc, 4.0 * gp);
        PairForm lw(d);
        lw.add_term(vec_dot_sigma(cross(B, cross(em, Bs))).mat(), sigma_plus().mat());
        lw.add_to_superop(acc, 2.0 * gp);
        PairForm rw(d);
        rw.add_term(sigma_minus().mat(), vec_dot_sigma(cross(B, cross(ep, Bs))).mat());
        rw.add_to_superop(acc, 2.0 * gp);
    };
    half(b, conj(b), conj(b_dot));
    half(conj(b), b, b_dot);
    return SuperOp(std::move(acc), d);
}

DensityMatrix spin_reference_steady(const SpinScenarioParams& p, double t) {
    const double a = p.alpha, g = p.gamma;
    Operator rho = cd(0.5) * identity_op(2);
    if (p.variant == SpinVariant::fast_rotation) {
        const double w = p.ramp.to_phase().omega(t);
        const double gw = g * w;
        const double denom = 2.0 * std::pow(a, 4) + gw * gw;
        rho = rho - cd(gw * a * a / denom) * sigma_y() - cd(0.5 * gw * gw / denom) * sigma_z();
    } else {
        const double w = p.ramp.to_phase().omega(t);
        const double wc = p.omega_c;
        const double denom = 2.0 * g * g * std::pow(w, 4) + std::pow(a, 4) * wc * wc;
        rho = rho + cd(a * a * wc * g * w * w / denom) * sigma_y() -
              cd(g * g * std::pow(w, 4) / denom) * sigma_z();
    }
    return DensityMatrix(rho);
}

BuiltGenerator build_oscillator_scenario(const OscillatorScenarioParams& p) {
    if (p.fock_dim < 10) throw InvalidArgument("oscillator scenario: fock_dim >= 10");
    if (p.gamma < 0.0) throw InvalidArgument("oscillator scenario: gamma >= 0");
    if (!p.drive_amplitude) throw InvalidArgument("oscillator scenario: drive amplitude required");
    if (p.t_end <= 0.0) throw InvalidArgument("oscillator scenario: t_end > 0 required");
    const double detuning_span = std::max(std::abs(p.drive_freq_profile.omega_min() - p.omega0),
                                          std::abs(p.drive_freq_profile.omega_max() - p.omega0));
    if (detuning_span >= p.omega0 + p.drive_freq_profile.omega_min())
        throw InvalidArgument("oscillator scenario: |Delta| must stay far below omega0 + omega_d");

    const int d = p.fock_dim;
    const Operator a = ladder_a(d), adag = ladder_adag(d);
    const PhaseProfile drive = p.drive_freq_profile.to_phase();
    const double w0 = p.omega0;

    // Slow phase psi(t) = integral(omega_d) - omega0 t and its rate.
    const auto psi = [drive_phi = drive.phi, w0](double t) { return drive_phi(t) - w0 * t; };
    const auto psi_dot = [drive_omega = drive.omega, w0](double t) { return drive_omega(t) - w0; };

    const ScalarFn f = p.drive_amplitude;
    const ScalarFn f_dot = p.drive_amplitude_dot; // may be null
    const ScalarFn half_f = [f](double t) { return 0.5 * f(t); };
    const ScalarFn half_f_dot = f_dot ? ScalarFn([f_dot](double t) { return 0.5 * f_dot(t); })
                                      : ScalarFn();

    auto rotating = [f, f_dot, psi, psi_dot](double sign) {
        ScalarFn c = [f, psi, sign](double t) {
            return 0.5 * f(t) * std::exp(cd(0.0, sign * psi(t)));
        };
        ScalarFn c_dot;
        if (f_dot)
            c_dot = [f, f_dot, psi, psi_dot, sign](double t) {
                const cd ph = std::exp(cd(0.0, sign * psi(t)));
                return 0.5 * (f_dot(t) + f(t) * cd(0.0, sign * psi_dot(t))) * ph;
            };
        return std::pair<ScalarFn, ScalarFn>(std::move(c), std::move(c_dot));
    };
    auto [c_plus, c_plus_dot] = rotating(+1.0);
    auto [c_minus, c_minus_dot] = rotating(-1.0);

    LindbladModel model;
    model.dim = d;
    model.jumps.emplace_back(a, p.gamma);
    model.h_harmonics[1] = {{half_f, half_f_dot, adag}};
    model.h_harmonics[-1] = {{half_f, half_f_dot, a}};
    model.h_harmonics[0] = {{c_plus, c_plus_dot, a}, {c_minus, c_minus_dot, adag}};

    BuiltGenerator built = build_lindblad_generator(model, phase_offset(drive, w0), p.theta0,
                                                    Window{0.0, p.t_end});
    if (p.gamma > 0.0) built.generator.slow_timescales.push_back(1.0 / p.gamma);
    if (p.drive_freq_profile.timescale() > 0.0)
        built.generator.slow_timescales.push_back(p.drive_freq_profile.timescale());
    if (detuning_span > 0.0) built.generator.slow_detunings.push_back(detuning_span);
    return built;
}

SuperOp oscillator_lc_superop(const OscillatorScenarioParams& p) {
    if (p.drive_freq_profile.kind != RampKind::constant)
        throw InvalidArgument("oscillator_lc_superop: constant drive frequency required");
    const int d = p.fock_dim;
    const double delta = p.drive_freq_profile.w_i - p.omega0;
    const double f = p.drive_amplitude(0.0).real();
    // i[(wd - w0) n - f/2 (a + adag), .] + gamma D[a] = -i[h, .] + gamma D[a]
    // with h = -(wd - w0) n + f/2 (a + adag).
    const Operator h = cd(-delta) * number_op(d) + cd(0.5 * f) * (ladder_a(d) + ladder_adag(d));
    return commutator_superop(h) + dissipator_superop(ladder_a(d), p.gamma);
}

OscillatorAsymptote oscillator_reference_asymptote(const OscillatorScenarioParams& p) {
    const DensityMatrix rho_c = null_steady_state(oscillator_lc_superop(p));
    const int d = p.fock_dim;
    OscillatorAsymptote out;
    out.n_ss = expectation(number_op(d), rho_c.op());
    // eta e^{i delta} = Tr[rho_c adag]
    cd adag_avg = 0.0;
    for (int k = 1; k < d; ++k) adag_avg += std::sqrt(static_cast<double>(k)) * rho_c.op()(k, k - 1);
    const double wd = p.drive_freq_profile.w_i;
    const double f = p.drive_amplitude(0.0).real();
    const double alpha_d = f / (2.0 * (p.omega0 + wd));
    out.osc_amplitude = 2.0 * alpha_d * std::abs(adag_avg);
    out.osc_period = M_PI / wd;
    return out;
}

void check_truncation_adequacy(const Trajectory& tr) {
    for (size_t i = 0; i < tr.size(); ++i) {
        const Operator& rho = tr.states()[i].op();
        const int d = rho.dim();
        const double top2 = rho(d - 1, d - 1).real() + rho(d - 2, d - 2).real();
        if (top2 > tolerances().truncation_population)
            throw TruncationTooSmall("top-two Fock population " + std::to_string(top2) + " at t=" +
                                     std::to_string(tr.times()[i]));
    }
}

DensityMatrix spin_default_state() { return basis_state(2, 0); }

DensityMatrix oscillator_default_state(int fock_dim) { return basis_state(fock_dim, 0); }

} // namespace floqgen
