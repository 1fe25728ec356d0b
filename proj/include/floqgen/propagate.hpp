#pragma once

#include "floqgen/generator.hpp"
#include "floqgen/trajectory.hpp"

namespace floqgen {

/// Fourier-block coefficients rho_F^(n)(t) of the extended-space state,
/// n in [-n_max, n_max].
struct ExtendedState {
    int n_max = 0;
    std::vector<Mat> blocks; // 2 n_max + 1 blocks of d x d

    Mat& block(int n) { return blocks[static_cast<size_t>(n + n_max)]; }
    const Mat& block(int n) const { return blocks[static_cast<size_t>(n + n_max)]; }
};

/// Direct time-ordered integration of the master equation with fixed-step
/// RK4, step tied to the fast period (h <= 2 pi / (omega_eff * spp)).
Trajectory propagate_exact(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                           const IntegratorConfig& cfg);

/// Max entrywise deviation between 0 -> t_end in one pass and restarting
/// from the state at t_mid. Sub-stepping is aligned on both routes, so any
/// deviation beyond roundoff flags absolute-time or phase-restart bugs.
double composition_check(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                         const IntegratorConfig& cfg, double t_mid, double t_end);

/// Truncated extended-Floquet-space propagation: integrates the block
/// system d/dt rho_F^(n) = sum_m Ltilde^(n-m) rho_F^(m) - i n omega_eff
/// rho_F^(n) for |n|,|m| <= n_max and reconstructs
/// rho(t) = sum_n rho_F^(n)(t) e^{i n (theta0 + phi(t))}.
///
/// Implementation integrates sigma^(n) = e^{i n phi(t)} rho_F^(n), which
/// satisfies the same truncated system with the -i n omega_eff term removed
/// analytically; this keeps h * n_max * omega_eff off the RK4 stability
/// boundary without changing the truncated dynamics.
Trajectory propagate_extended(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                              int n_max, const IntegratorConfig& cfg,
                              bool verify_truncation = false);

/// Final extended-space coefficients of the last propagate_extended call on
/// this thread (diagnostic access for tests).
ExtendedState propagate_extended_final_blocks(const QuasiPeriodicGenerator& g,
                                              const DensityMatrix& rho0, int n_max,
                                              const IntegratorConfig& cfg);

/// Largest per-observable change when the step count is doubled; the
/// convergence diagnostic reported in run manifests.
double step_halving_delta(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                          const IntegratorConfig& cfg, const Operator& obs);

} // namespace floqgen
