#include "floqgen/phase.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace floqgen {

namespace {

// log(cosh(x)) without overflow for large |x|.
double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

} // namespace

PhaseProfile constant_phase(double omega) {
    return {[omega](double t) { return omega * t; }, [omega](double) { return omega; },
            [](double) { return 0.0; }};
}

PhaseProfile tanh_ramp_phase(double wi, double wf, double t0, double tau) {
    const double mid = 0.5 * (wf + wi), half = 0.5 * (wf - wi);
    return {[=](double t) {
                return mid * t + half * tau * (log_cosh((t - t0) / tau) - log_cosh(-t0 / tau));
            },
            [=](double t) { return mid + half * std::tanh((t - t0) / tau); },
            [=](double t) {
                const double c = std::cosh((t - t0) / tau);
                return half / (tau * c * c);
            }};
}

PhaseProfile sinusoid_phase(double wi, double wf, double tau) {
    const double mid = 0.5 * (wf + wi), half = 0.5 * (wf - wi);
    return {[=](double t) { return mid * t - half * tau * (std::cos(t / tau) - 1.0); },
            [=](double t) { return mid + half * std::sin(t / tau); },
            [=](double t) { return half / tau * std::cos(t / tau); }};
}

PhaseProfile phase_sum(const PhaseProfile& a, const PhaseProfile& b) {
    return {[pa = a.phi, pb = b.phi](double t) { return pa(t) + pb(t); },
            [oa = a.omega, ob = b.omega](double t) { return oa(t) + ob(t); },
            [da = a.omega_dot, db = b.omega_dot](double t) { return da(t) + db(t); }};
}

PhaseProfile phase_offset(const PhaseProfile& p, double omega_offset) {
    return {[phi = p.phi, omega_offset](double t) { return phi(t) + omega_offset * t; },
            [om = p.omega, omega_offset](double t) { return om(t) + omega_offset; },
            p.omega_dot};
}

PhaseProfile tabulated_phase(std::function<double(double)> omega, double t_end, double dt) {
    if (t_end <= 0.0 || dt <= 0.0) throw InvalidArgument("tabulated_phase: bad window");
    const int n = static_cast<int>(std::ceil(t_end / dt)) + 1;
    const double h = t_end / (n - 1);
    auto table = std::make_shared<std::vector<double>>(n);
    auto omegas = std::make_shared<std::vector<double>>(n);
    (*table)[0] = 0.0;
    for (int i = 0; i < n; ++i) (*omegas)[i] = omega(i * h);
    for (int i = 1; i < n; ++i) {
        // Simpson on the half-step.
        const double tm = (i - 0.5) * h;
        (*table)[i] = (*table)[i - 1] + h / 6.0 * ((*omegas)[i - 1] + 4.0 * omega(tm) + (*omegas)[i]);
    }
    auto phi = [table, omegas, h, n](double t) {
        if (t <= 0.0) return (*table)[0] + t * (*omegas)[0];
        int i = static_cast<int>(t / h);
        if (i >= n - 1) return table->back() + (t - (n - 1) * h) * omegas->back();
        // Cubic Hermite with phi-values and omega as exact derivative.
        const double s = (t - i * h) / h;
        const double p0 = (*table)[i], p1 = (*table)[i + 1];
        const double m0 = (*omegas)[i] * h, m1 = (*omegas)[i + 1] * h;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 +
               (s3 - s2) * m1;
    };
    auto om = [omega](double t) { return omega(t); };
    auto om_dot = [omega](double t) {
        const double d = 1e-5;
        return (omega(t + d) - omega(t - d)) / (2.0 * d);
    };
    return {phi, om, om_dot};
}

void validate_phase(const PhaseProfile& p, double t_begin, double t_end, int samples) {
    if (std::abs(p.phi(0.0)) > 1e-12) throw InvalidArgument("phase: phi(0) != 0");
    for (int i = 0; i <= samples; ++i) {
        const double t = t_begin + (t_end - t_begin) * i / samples;
        const double w = p.omega(t);
        if (!(w > 0.0)) throw InvalidArgument("phase: omega_eff <= 0 at t=" + std::to_string(t));
        const double d = 1e-4 / w;
        const double fd = (p.phi(t + d) - p.phi(t - d)) / (2.0 * d);
        if (std::abs(fd - w) > 1e-6 * std::max(1.0, std::abs(w)))
            throw InvalidArgument("phase: phi' != omega_eff at t=" + std::to_string(t));
    }
}

} // namespace floqgen
