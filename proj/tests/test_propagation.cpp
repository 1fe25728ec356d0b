#include <doctest.h>

#include <cmath>

#include "floqgen/propagate.hpp"
#include "floqgen/scenarios.hpp"
#include "test_util.hpp"

using namespace floqgen;
using namespace floqgen::test;
namespace k = floqgen::kernels;

namespace {

const double pi = std::acos(-1.0);

SpinScenarioParams short_spin(double t_end = 10.0) {
    SpinScenarioParams p;
    p.alpha = 0.5;
    p.gamma = 0.1;
    p.variant = SpinVariant::fast_rotation;
    p.ramp = {RampKind::tanh_ramp, 1.5, 3.5, 4.0, 1.5};
    p.t_end = t_end;
    return p;
}

BuiltGenerator static_damping(double gamma) {
    LindbladModel model;
    model.dim = 2;
    model.jumps.emplace_back(sigma_minus(), gamma);
    return build_lindblad_generator(model, constant_phase(2.0), 0.0, {0.0, 50.0});
}

} // namespace

TEST_CASE("zero generator: constant trajectory") {
    LindbladModel model;
    model.dim = 2;
    model.jumps.emplace_back(sigma_minus(), 0.0);
    const auto built = build_lindblad_generator(model, constant_phase(1.0), 0.0, {0.0, 5.0});
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(5.0, 10);
    const Trajectory tr = propagate_exact(built.generator, basis_state(2, 0), cfg);
    for (const auto& s : tr.states())
        CHECK(max_abs_diff(s.op().mat(), basis_state(2, 0).op().mat()) < 1e-14);
}

TEST_CASE("static amplitude damping reproduces the analytic decay") {
    const auto built = static_damping(0.1);
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(50.0, 25);
    Trajectory tr = propagate_exact(built.generator, basis_state(2, 0), cfg);
    tr.add_observable("sigma_z", sigma_z());
    for (size_t i = 0; i < tr.size(); ++i) {
        const double expected = 2.0 * std::exp(-2.0 * 0.1 * tr.times()[i]) - 1.0;
        CHECK(std::abs(tr.observable("sigma_z")[i] - expected) < 1e-8);
    }
}

TEST_CASE("exact trajectories conserve trace and hermiticity") {
    const auto built = build_spin_scenario(short_spin(20.0));
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(20.0, 40);
    const Trajectory tr = propagate_exact(built.generator, spin_default_state(), cfg);
    for (const auto& s : tr.states()) {
        CHECK(std::abs(s.op().trace() - cd(1.0)) < 1e-10);
        CHECK(max_abs_diff(s.op().mat(), s.op().adjoint().mat()) < 1e-11);
        CHECK(s.min_eigenvalue() >= -1e-8);
    }
}

TEST_CASE("spin exact trajectory oscillates at the instantaneous fast period") {
    // Over a window where omega ramps 1.5 -> 3.5 the micro-motion amplitude
    // in <sigma_z> shrinks roughly with 1/omega.
    SpinScenarioParams p = short_spin(60.0);
    p.ramp = {RampKind::tanh_ramp, 1.5, 3.5, 30.0, 5.0};
    p.t_end = 60.0;
    const auto built = build_spin_scenario(p);
    IntegratorConfig cfg;
    cfg.steps_per_fast_period = 64;
    cfg.t_grid = uniform_grid(60.0, 1200);
    Trajectory tr = propagate_exact(built.generator, spin_default_state(), cfg);
    tr.add_observable("sigma_z", sigma_z());
    const auto& sz = tr.observable("sigma_z");
    // Peak-to-peak within one fast period, early (omega ~ 1.5) vs late
    // (omega ~ 3.5), after the initial transient decays.
    auto swing = [&](double t_center) {
        const double T = 2.0 * pi / built.generator.phase().omega(t_center);
        double lo = 1e9, hi = -1e9;
        for (size_t i = 0; i < tr.size(); ++i) {
            if (std::abs(tr.times()[i] - t_center) > 0.5 * T) continue;
            lo = std::min(lo, sz[i]);
            hi = std::max(hi, sz[i]);
        }
        return hi - lo;
    };
    CHECK(swing(52.0) < swing(20.0));
}

TEST_CASE("composition law: degenerate splits exact, midpoint split at roundoff") {
    const auto built = build_spin_scenario(short_spin());
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(10.0, 10);
    CHECK(composition_check(built.generator, spin_default_state(), cfg, 0.0, 10.0) == 0.0);
    CHECK(composition_check(built.generator, spin_default_state(), cfg, 10.0, 10.0) == 0.0);
    CHECK(composition_check(built.generator, spin_default_state(), cfg, 5.0, 10.0) < 1e-8);
}

TEST_CASE("extended space: undriven reduction is exact") {
    const auto built = static_damping(0.08);
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(30.0, 15);
    const Trajectory a = propagate_exact(built.generator, basis_state(2, 0), cfg);
    const Trajectory b = propagate_extended(built.generator, basis_state(2, 0), 3, cfg);
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(max_abs_diff(a.states()[i].op().mat(), b.states()[i].op().mat()) < 1e-12);
}

TEST_CASE("extended space: initial condition sits in the n=0 block only") {
    SpinScenarioParams p = short_spin();
    p.theta0 = 1.3; // reconstruction at t=0 must return rho0 for any theta
    const auto built = build_spin_scenario(p);
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(4.0, 4);
    const Trajectory tr = propagate_extended(built.generator, spin_default_state(), 4, cfg);
    CHECK(max_abs_diff(tr.states()[0].op().mat(), spin_default_state().op().mat()) == 0.0);

    // After an infinitesimal time the blocks have only moved by O(t ||L||).
    IntegratorConfig tiny;
    tiny.t_grid = {0.0, 1e-8};
    const ExtendedState st =
        propagate_extended_final_blocks(built.generator, spin_default_state(), 4, tiny);
    CHECK(max_abs_diff(st.block(0), spin_default_state().op().mat()) < 1e-7);
    for (int n = 1; n <= 4; ++n) {
        CHECK(k::max_abs(st.block(n)) < 1e-7);
        CHECK(k::max_abs(st.block(-n)) < 1e-7);
    }
}

TEST_CASE("oracle agreement: extended matches exact on the driven spin") {
    for (double theta0 : {0.0, 0.7}) { // theta0 != 0 exercises the picture shift
        SpinScenarioParams p = short_spin(12.0);
        p.theta0 = theta0;
        const auto built = build_spin_scenario(p);
        IntegratorConfig cfg;
        cfg.steps_per_fast_period = 220;
        cfg.t_grid = uniform_grid(12.0, 24);
        const Trajectory ex = propagate_exact(built.generator, spin_default_state(), cfg);
        const Trajectory fl = propagate_extended(built.generator, spin_default_state(), 16, cfg);
        double worst = 0.0;
        for (size_t i = 0; i < ex.size(); ++i)
            worst = std::max(worst, max_abs_diff(ex.states()[i].op().mat(), fl.states()[i].op().mat()));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("extended space: truncation check flags a too-small n_max") {
    const auto built = build_spin_scenario(short_spin(12.0));
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(12.0, 12);
    CHECK_THROWS_AS(propagate_extended(built.generator, spin_default_state(), 1, cfg, true),
                    TruncationNotConverged);
    CHECK_NOTHROW(propagate_extended(built.generator, spin_default_state(), 8, cfg, true));
}

TEST_CASE("step-halving delta is small for a resolved static problem") {
    const auto built = static_damping(0.1);
    IntegratorConfig cfg;
    cfg.t_grid = uniform_grid(30.0, 15);
    CHECK(step_halving_delta(built.generator, basis_state(2, 0), cfg, sigma_z()) < 1e-6);
}

TEST_CASE("integrator guards") {
    const auto built = build_spin_scenario(short_spin());
    IntegratorConfig cfg;
    cfg.steps_per_fast_period = 4;
    cfg.t_grid = uniform_grid(10.0, 10);
    CHECK_THROWS_AS(propagate_exact(built.generator, spin_default_state(), cfg), StepTooLarge);
    cfg.steps_per_fast_period = 40;
    cfg.t_grid = {0.0};
    CHECK_THROWS_AS(propagate_exact(built.generator, spin_default_state(), cfg), InvalidArgument);
    cfg.t_grid = {0.0, 2.0, 1.0};
    CHECK_THROWS_AS(propagate_exact(built.generator, spin_default_state(), cfg), InvalidArgument);
}
