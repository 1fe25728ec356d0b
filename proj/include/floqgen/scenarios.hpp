#pragma once

#include <array>

#include "floqgen/hf_floquet.hpp"

namespace floqgen {

enum class RampKind { constant, tanh_ramp, sinusoid };

/// Frequency profile from the figure captions:
///   tanh:     w(t) = (wf+wi)/2 + (wf-wi)/2 tanh((t-t0)/tau)
///   sinusoid: w(t) = (wf+wi)/2 + (wf-wi)/2 sin(t/tau)
/// Closed-form phases are attached for every kind.
struct RampSpec {
    RampKind kind = RampKind::constant;
    double w_i = 1.0;
    double w_f = 1.0;
    double t0 = 0.0;
    double tau = 1.0;

    PhaseProfile to_phase() const;
    double omega_min() const; // lower bound over all t
    double omega_max() const;
    /// Ramp timescale entering the slow-step bound; 0 for constant.
    double timescale() const;
};

enum class SpinVariant { fast_rotation, slow_rotation_fast_amplitude };

struct SpinScenarioParams {
    double alpha = 0.5;
    double gamma = 0.1;
    SpinVariant variant = SpinVariant::fast_rotation;
    RampSpec ramp;
    double omega_c = 0.0; // slow angular velocity (slow-rotation variant)
    double theta0 = 0.0;
    double t_end = 0.0;
};

/// Spin-1/2 in a rotating transverse field with amplitude damping:
/// fast_rotation has B = (1/2)[0, 1, -i] so B_total = [0, cos, sin] of the
/// fast phase; slow_rotation has B = (1/2)[0, cos wc t, sin wc t] (real)
/// with analytic derivatives attached.
BuiltGenerator build_spin_scenario(const SpinScenarioParams& p);

/// Closed-form effective-generator term of the given order (1 or 2),
/// evaluated by the cross-product formulas. Independent of the generic
/// commutator route.
SuperOp spin_reference_leff(const SpinScenarioParams& p, double t, int order);

/// Closed-form instantaneous/asymptotic steady state: the rho_s display for
/// fast_rotation (depends on omega_eff(t)), rho_infinity for slow rotation.
DensityMatrix spin_reference_steady(const SpinScenarioParams& p, double t);

struct OscillatorScenarioParams {
    double omega0 = 1.0;
    ScalarFn drive_amplitude;     // f(t)
    ScalarFn drive_amplitude_dot; // optional
    RampSpec drive_freq_profile;  // d/dt(omega_d t)
    int fock_dim = 30;
    double gamma = 0.01;
    double theta0 = 0.0;
    double t_end = 0.0;
};

/// Driven damped oscillator in the interaction picture: fast phase
/// phi = omega0 t + integral(omega_d), harmonics H^(1) = f/2 adag,
/// H^(-1) = f/2 a, H^(0) = f/2 (a e^{i psi} + h.c.) with the slow phase
/// psi = integral(omega_d) - omega0 t, jump (a, gamma).
BuiltGenerator build_oscillator_scenario(const OscillatorScenarioParams& p);

/// The displayed co-rotating generator L_c whose steady state governs the
/// long-time mean photon number (constant f and omega_d only).
SuperOp oscillator_lc_superop(const OscillatorScenarioParams& p);

struct OscillatorAsymptote {
    double n_ss = 0.0;          // Tr[rho_c(inf) adag a]
    double osc_amplitude = 0.0; // 2 |alpha_D| eta
    double osc_period = 0.0;    // pi / omega_d
};

/// Long-time asymptote from the steady state of L_c plus the first-order
/// micro-motion displacement alpha_D = -f / (2 omega_eff).
OscillatorAsymptote oscillator_reference_asymptote(const OscillatorScenarioParams& p);

/// Top-two Fock-level population along a trajectory; throws
/// TruncationTooSmall when it exceeds the truncation tolerance.
void check_truncation_adequacy(const Trajectory& tr);

// Default initial states (not stated in the source experiments; recorded as
// a choice): spin-up and the oscillator vacuum.
DensityMatrix spin_default_state();
DensityMatrix oscillator_default_state(int fock_dim);

} // namespace floqgen
