#pragma once

#include <functional>
#include <vector>

#include "floqgen/errors.hpp"

namespace floqgen {

/// Accumulated fast phase phi(t), its derivative omega_eff(t) > 0 and the
/// chirp rate omega_eff_dot(t). phi(0) = 0; the initial phase theta is
/// carried by the generator, not here.
struct PhaseProfile {
    std::function<double(double)> phi;
    std::function<double(double)> omega;
    std::function<double(double)> omega_dot;
};

PhaseProfile constant_phase(double omega);

/// omega(t) = (wf+wi)/2 + (wf-wi)/2 * tanh((t-t0)/tau), closed-form phi.
PhaseProfile tanh_ramp_phase(double wi, double wf, double t0, double tau);

/// omega(t) = (wf+wi)/2 + (wf-wi)/2 * sin(t/tau), closed-form phi.
PhaseProfile sinusoid_phase(double wi, double wf, double tau);

/// Pointwise sum of two profiles (oscillator: omega0 t + drive phase).
PhaseProfile phase_sum(const PhaseProfile& a, const PhaseProfile& b);

/// Shift a profile by a constant frequency offset.
PhaseProfile phase_offset(const PhaseProfile& p, double omega_offset);

/// Numeric fallback when no closed-form phi exists: cumulative Simpson
/// integration of omega on a uniform grid, cubic-Hermite evaluation
/// (O(h^4), matching the integrator order). omega_dot by central FD.
PhaseProfile tabulated_phase(std::function<double(double)> omega, double t_end, double dt);

/// Check omega > 0, phi(0) = 0 and phi' = omega (central FD, relative
/// 1e-6) at sample points. Throws InvalidArgument on violation.
void validate_phase(const PhaseProfile& p, double t_begin, double t_end, int samples = 64);

} // namespace floqgen
