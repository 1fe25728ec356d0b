#pragma once

#include <string>

namespace floqgen {

/// Central tolerance record. Every runtime check reads from here so the
/// whole suite can be tuned (or deliberately broken) in one place.
struct Tolerances {
    double hermiticity = 1e-10;          // max |rho - rho^dag| for valid states
    double trace = 1e-10;                // |Tr rho - 1| for valid states
    double positivity = 1e-8;            // -min eigenvalue allowed (tol_p)
    double positivity_effective = 1e-6;  // relaxed tol_p for effective(K) trajectories
    double trace_annihilation = 1e-10;   // Tr(S X) = 0 checks on generators
    double hermiticity_preserving = 1e-10;
    double pairing = 1e-10;              // L^(-n)(X^dag) = (L^(n) X)^dag
    double expm_residual = 1e-12;        // matrix exponential target
    double kernel_residual = 1e-9;       // |L rho_ss| for steady states
    double kernel_degeneracy_ratio = 1e-8; // sigma_{n-1}/sigma_0 threshold
    double fd_match_rel = 1e-6;          // analytic vs finite-difference derivative
    double trajectory_trace = 1e-8;      // trace drift along exact trajectories
    double trajectory_hermiticity = 1e-9;
    double oracle_pointwise = 1e-6;      // exact vs extended-space agreement
    double composition = 1e-8;           // propagator composition law
    double truncation_population = 1e-8; // top-two Fock level population
    double form_compress = 1e-13;        // relative cutoff for pair-form ranks
    double term_drop = 1e-13;            // relative cutoff for vanished expansion terms
};

/// Process-wide tolerance set (mutable for overrides; reads are lock-free).
Tolerances& tolerances();

/// Replace the global tolerance set.
void set_tolerances(const Tolerances& t);

/// Apply overrides from a JSON file (keys match field names). Unknown keys
/// are an error. Returns the resulting set.
Tolerances load_tolerance_overrides(const std::string& path);

} // namespace floqgen
