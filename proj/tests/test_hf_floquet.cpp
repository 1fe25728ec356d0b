#include <doctest.h>

#include <cmath>
#include <random>

#include "floqgen/expm.hpp"
#include "floqgen/hf_floquet.hpp"
#include "floqgen/lapack.hpp"
#include "floqgen/scenarios.hpp"
#include "test_util.hpp"

using namespace floqgen;
using namespace floqgen::test;
namespace k = floqgen::kernels;

namespace {

const double pi = std::acos(-1.0);

SpinScenarioParams static_spin(double omega) {
    SpinScenarioParams p;
    p.alpha = 0.5;
    p.gamma = 0.1;
    p.variant = SpinVariant::fast_rotation;
    p.ramp = {RampKind::constant, omega, omega, 0.0, 1.0};
    p.t_end = 50.0;
    return p;
}

// Random time-dependent model of the restricted single-jump shape, with
// analytic derivatives, exercising every term of the expansions.
LindbladModel random_restricted_model(int dim, std::mt19937& rng) {
    LindbladModel model;
    model.dim = dim;
    std::uniform_real_distribution<double> u(0.2, 1.0);
    const double nu = u(rng), g0 = 0.2 * u(rng);

    const Operator a1 = random_operator(dim, rng, 0.5);
    const Operator h0a = random_hermitian(dim, rng, 0.5);
    const Operator h0b = random_hermitian(dim, rng, 0.5);
    const cd c1(u(rng), u(rng));

    auto rot = [nu](cd amp, double sign) {
        ScalarFn c = [amp, nu, sign](double t) { return amp * std::exp(cd(0.0, sign * nu * t)); };
        ScalarFn cdot = [amp, nu, sign](double t) {
            return amp * cd(0.0, sign * nu) * std::exp(cd(0.0, sign * nu * t));
        };
        return std::pair<ScalarFn, ScalarFn>(std::move(c), std::move(cdot));
    };
    auto [cp, cp_dot] = rot(c1, +1.0);
    auto [cm, cm_dot] = rot(std::conj(c1), -1.0);

    model.h_harmonics[1] = {{cp, cp_dot, a1}};
    model.h_harmonics[-1] = {{cm, cm_dot, a1.adjoint()}};
    // Slowly rotating Hermitian H^(0) = h0a + cos(nu t) h0b.
    const ScalarFn c0 = [nu](double t) { return cd(std::cos(nu * t)); };
    const ScalarFn c0_dot = [nu](double t) { return cd(-nu * std::sin(nu * t)); };
    model.h_harmonics[0] = {{const_fn(1.0), const_fn(0.0), h0a}, {c0, c0_dot, h0b}};
    model.jumps.emplace_back(random_operator(dim, rng, 0.7), g0);
    return model;
}

} // namespace

TEST_CASE("order-1 term: undriven zero, spin closed form, real-B cancellation") {
    LindbladModel undriven;
    undriven.dim = 2;
    undriven.jumps.emplace_back(sigma_minus(), 0.2);
    const auto u = build_lindblad_generator(undriven, constant_phase(2.0), 0.0, {0.0, 10.0});
    CHECK(k::max_abs(leff_order1_term(u.generator, 1.0).mat()) < 1e-14);

    // Fast rotation: L_eff(1) = i (alpha^2/omega) [sigma_x, .].
    const auto spin = build_spin_scenario(static_spin(2.0));
    const SuperOp expected = commutator_superop(cd(-0.25 / 2.0) * sigma_x());
    CHECK(max_abs_diff(leff_order1_term(spin.generator, 3.0).mat(), expected.mat()) < 1e-12);
    CHECK(leff_order1_term(spin.generator, 3.0).trace_annihilation_defect() < 1e-12);

    // Slow rotation (real B): the first-order term vanishes.
    SpinScenarioParams slow;
    slow.alpha = 0.5;
    slow.gamma = 0.01;
    slow.variant = SpinVariant::slow_rotation_fast_amplitude;
    slow.omega_c = 0.3;
    slow.ramp = {RampKind::constant, 2.0, 2.0, 0.0, 1.0};
    slow.t_end = 50.0;
    const auto sg = build_spin_scenario(slow);
    CHECK(k::max_abs(leff_order1_term(sg.generator, 4.0).mat()) < 1e-14);
}

TEST_CASE("dual-formula equivalence: generic expansion equals the specialized form") {
    std::mt19937 rng(97);
    for (int trial = 0; trial < 8; ++trial) {
        const int dim = trial % 2 == 0 ? 2 : 3;
        const LindbladModel model = random_restricted_model(dim, rng);
        const PhaseProfile phase = constant_phase(5.0 + trial);
        const auto built = build_lindblad_generator(model, phase, 0.0, {0.0, 20.0});
        for (double t : {0.3, 4.1, 11.7}) {
            const SuperOp generic =
                leff_order1_term(built.generator, t) + leff_order2_term(built.generator, t);
            const SuperOp special = leff_lindblad_specialized(model, phase, t);
            CHECK(max_abs_diff(generic.mat(), special.mat()) < 1e-10);
            CHECK(generic.trace_annihilation_defect() < 1e-11);
        }
    }
}

TEST_CASE("specialized formula guards its restricted shape") {
    std::mt19937 rng(101);
    LindbladModel model = random_restricted_model(2, rng);
    model.jumps.emplace_back(sigma_z(), 0.1);
    CHECK_THROWS_AS(leff_lindblad_specialized(model, constant_phase(3.0), 0.0), ShapeMismatch);

    LindbladModel wide = random_restricted_model(2, rng);
    wide.h_harmonics[2] = {{const_fn(1.0), const_fn(0.0), sigma_plus()}};
    wide.h_harmonics[-2] = {{const_fn(1.0), const_fn(0.0), sigma_minus()}};
    CHECK_THROWS_AS(leff_lindblad_specialized(wide, constant_phase(3.0), 0.0), ShapeMismatch);

    // H^(+-1) = 0: the whole correction vanishes.
    LindbladModel undriven;
    undriven.dim = 2;
    undriven.h_harmonics[0] = {{const_fn(1.0), const_fn(0.0), sigma_x()}};
    undriven.jumps.emplace_back(sigma_minus(), 0.3);
    CHECK(k::max_abs(leff_lindblad_specialized(undriven, constant_phase(3.0), 0.0).mat()) < 1e-14);
}

TEST_CASE("order scaling: doubling omega halves order 1 and quarters order 2") {
    const auto g1 = build_spin_scenario(static_spin(4.0));
    const auto g2 = build_spin_scenario(static_spin(8.0));
    const double t = 2.0;
    Mat first = leff_order1_term(g1.generator, t).mat();
    k::scal(first.size(), 0.5, first.data());
    CHECK(max_abs_diff(first, leff_order1_term(g2.generator, t).mat()) < 1e-12);
    Mat second = leff_order2_term(g1.generator, t).mat();
    k::scal(second.size(), 0.25, second.data());
    CHECK(max_abs_diff(second, leff_order2_term(g2.generator, t).mat()) < 1e-12);
}

TEST_CASE("micro-motion components: spin closed form and exact 1/omega scaling") {
    const auto spin = build_spin_scenario(static_spin(2.0));
    const double t = 1.7;
    auto comps = omega_components(spin.generator, t, 1);
    // Synthesized Omega_(1) at total phase phi equals
    // -i (alpha/omega) [sigma_y sin phi - sigma_z cos phi, .].
    for (double phi : {0.0, 0.8, 2.9}) {
        Mat synth(4, 4);
        for (const auto& [n, s] : comps)
            k::add_scaled(synth, std::exp(cd(0.0, n * phi)), s.mat());
        const Operator target =
            cd(0.25) * (std::sin(phi) * sigma_y() - std::cos(phi) * sigma_z()); // alpha/omega = 1/4
        CHECK(max_abs_diff(synth, commutator_superop(target).mat()) < 1e-12);
    }

    const auto spin2 = build_spin_scenario(static_spin(4.0));
    auto comps2 = omega_components(spin2.generator, t, 1);
    for (const auto& [n, s] : comps) {
        Mat halved = s.mat();
        k::scal(halved.size(), 0.5, halved.data());
        CHECK(max_abs_diff(halved, comps2.at(n).mat()) < 1e-13);
    }

    // Static parameters: no derivative contribution in Omega_(2); the
    // components are time independent.
    const MicroMotionGenerator mm(spin.generator, 2);
    CHECK(max_abs_diff(mm.component(1, 0.5).mat(), mm.component(1, 7.9).mat()) < 1e-13);
}

TEST_CASE("micro-motion gauge: the n=0 projection of the exponent vanishes") {
    const auto spin = build_spin_scenario(static_spin(2.0));
    const MicroMotionGenerator mm(spin.generator, 2);
    const int nodes = 64;
    Mat acc(4, 4);
    for (int j = 0; j < nodes; ++j)
        k::add_scaled(acc, 1.0 / nodes, mm.exponent(3.0, 2.0 * pi * j / nodes).mat());
    CHECK(k::max_abs(acc) < 1e-12);
}

TEST_CASE("micro-motion operator: periodicity, identity limit, unitarity at order 1") {
    const auto spin = build_spin_scenario(static_spin(2.0));
    const double T = 2.0 * pi / 2.0;
    const SuperOp d1 = micromotion_superop(spin.generator, 1.0, 0.4, 1);
    const SuperOp d2 = micromotion_superop(spin.generator, 1.0 + T, 0.4, 1);
    CHECK(max_abs_diff(d1.mat(), d2.mat()) < 1e-10); // strict T-periodicity (static params)

    const auto fast = build_spin_scenario(static_spin(1e6));
    const SuperOp near_id = micromotion_superop(fast.generator, 1.0, 0.3, 1);
    CHECK(max_abs_diff(near_id.mat(), Mat::identity(4)) < 1e-5);

    // Order-1 micro-motion of a Hamiltonian drive preserves spectra.
    std::mt19937 rng(113);
    Operator h = random_hermitian(2, rng, 0.4);
    h = h + (cd(1.0) - h.trace()) * cd(0.5) * identity_op(2);
    const DensityMatrix rho = DensityMatrix::hermitized(h);
    const Operator mapped = d1.apply(rho.op());
    const auto ev_in = lapack::hermitian_eigenvalues(rho.op().mat());
    const auto ev_out = lapack::hermitian_eigenvalues(mapped.mat());
    for (size_t i = 0; i < ev_in.size(); ++i) CHECK(std::abs(ev_in[i] - ev_out[i]) < 1e-9);

    // D and D^{-1} really are inverses.
    const MicroMotionGenerator mm(spin.generator, 2);
    const Mat prod = k::matmul(mm.micromotion(2.0, 1.1).mat(), mm.micromotion_inverse(2.0, 1.1).mat());
    CHECK(max_abs_diff(prod, Mat::identity(4)) < 1e-12);
}

TEST_CASE("effective generator: order 0 equals the n=0 component; static limit is constant") {
    const auto spin = build_spin_scenario(static_spin(2.0));
    const EffectiveGenerator e0(spin.generator, 0);
    CHECK(max_abs_diff(e0.eval(3.0).mat(), spin.generator.component(0).at(3.0).mat()) == 0.0);

    const EffectiveGenerator e2(spin.generator, 2);
    CHECK(max_abs_diff(e2.eval(1.0).mat(), e2.eval(42.0).mat()) < 1e-12);

    // Grouped-and-compressed corrections match the direct term sums.
    SpinScenarioParams ramped = static_spin(2.0);
    ramped.ramp = {RampKind::tanh_ramp, 1.5, 3.5, 25.0, 5.0};
    const auto rg = build_spin_scenario(ramped);
    const EffectiveGenerator er(rg.generator, 2);
    for (double t : {3.0, 25.0, 44.0}) {
        const Mat direct =
            k::add(leff_order1_term(rg.generator, t).mat(), leff_order2_term(rg.generator, t).mat());
        CHECK(max_abs_diff(er.corrections(t).mat(), direct) < 1e-12);
    }
}

TEST_CASE("order-by-order trace annihilation on a full operator basis") {
    std::mt19937 rng(127);
    const LindbladModel model = random_restricted_model(3, rng);
    const auto built = build_lindblad_generator(model, constant_phase(6.0), 0.0, {0.0, 20.0});
    for (double t : {0.9, 8.2}) {
        CHECK(built.generator.component(0).at(t).trace_annihilation_defect() < 1e-11);
        CHECK(leff_order1_term(built.generator, t).trace_annihilation_defect() < 1e-11);
        CHECK(leff_order2_term(built.generator, t).trace_annihilation_defect() < 1e-11);
    }
}

TEST_CASE("instantaneous steady state matches the displayed rho_s across the ramp range") {
    for (double omega : {1.5, 2.5, 3.5}) {
        SpinScenarioParams p = static_spin(omega);
        const auto built = build_spin_scenario(p);
        const EffectiveGenerator eff(built.generator, 1);
        const DensityMatrix via_kernel = instantaneous_steady_state(eff, 1.0);
        const DensityMatrix closed = spin_reference_steady(p, 1.0);
        CHECK(max_abs_diff(via_kernel.op().mat(), closed.op().mat()) < 1e-8);
    }
}

TEST_CASE("steady-state limits: gamma omega / alpha^2 large and small") {
    // ratio = 100: <sigma_z> -> -1; ratio = 0.01: <sigma_z> -> 0.
    SpinScenarioParams big = static_spin(8.0);
    big.alpha = std::sqrt(big.gamma * 8.0 / 100.0);
    const auto bg = build_spin_scenario(big);
    const DensityMatrix s1 = instantaneous_steady_state(EffectiveGenerator(bg.generator, 1), 0.5);
    CHECK(std::abs(expectation(sigma_z(), s1.op()) - (-1.0)) < 0.02);

    SpinScenarioParams small = static_spin(8.0);
    small.alpha = std::sqrt(small.gamma * 8.0 / 0.01);
    const auto sg = build_spin_scenario(small);
    const DensityMatrix s2 = instantaneous_steady_state(EffectiveGenerator(sg.generator, 1), 0.5);
    CHECK(std::abs(expectation(sigma_z(), s2.op())) < 0.02);
}

TEST_CASE("propagate_effective: order-0 undriven reduction equals exact") {
    LindbladModel model;
    model.dim = 2;
    model.jumps.emplace_back(sigma_minus(), 0.12);
    auto built = build_lindblad_generator(model, constant_phase(3.0), 0.0, {0.0, 30.0});
    built.generator.slow_timescales.push_back(1.0 / 0.12);
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(30.0, 20);
    const Trajectory ex = propagate_exact(built.generator, basis_state(2, 0), cfg);
    const Trajectory ef = propagate_effective(built.generator, basis_state(2, 0), cfg, 0, false);
    for (size_t i = 0; i < ex.size(); ++i)
        CHECK(max_abs_diff(ex.states()[i].op().mat(), ef.states()[i].op().mat()) < 1e-9);
    CHECK(ef.tag() == MethodTag::effective);
}

TEST_CASE("effective + micro-motion tracks the exact trajectory pointwise") {
    // Static spin at high omega: order-2 L_eff with order-1 micro-motion
    // should sit within ~omega^{-3} of the exact run.
    SpinScenarioParams p = static_spin(16.0);
    p.t_end = 20.0 * 2.0 * pi / 16.0;
    const auto built = build_spin_scenario(p);
    IntegratorConfig cfg;
    cfg.steps_per_fast_period = 160;
    cfg.t_grid = uniform_grid(p.t_end, 16);
    const Trajectory ex = propagate_exact(built.generator, spin_default_state(), cfg);
    IntegratorConfig ecfg = cfg;
    ecfg.max_step = 0.01;
    const Trajectory ef =
        propagate_effective(built.generator, spin_default_state(), ecfg, 2, true, 1);
    CHECK(ef.tag() == MethodTag::effective_micromotion);
    double worst = 0.0;
    for (size_t i = 0; i < ex.size(); ++i)
        worst = std::max(worst, max_abs_diff(ex.states()[i].op().mat(), ef.states()[i].op().mat()));
    CHECK(worst < 2.5e-3); // omega^{-2..-3} regime at omega = 16
    // Without micro-motion the pointwise error is dominated by the
    // micro-motion amplitude ~ alpha/omega.
    const Trajectory plain =
        propagate_effective(built.generator, spin_default_state(), ecfg, 2, false);
    double worst_plain = 0.0;
    for (size_t i = 0; i < ex.size(); ++i)
        worst_plain = std::max(worst_plain,
                               max_abs_diff(ex.states()[i].op().mat(), plain.states()[i].op().mat()));
    CHECK(worst_plain > 5.0 * worst);
}
