#include "floqgen/propagate.hpp"

#include <algorithm>
#include <cmath>

namespace floqgen {

namespace {

using Blocks = std::vector<Mat>;

// dst = src + alpha * k
void blocks_set_axpy(Blocks& dst, const Blocks& src, double alpha, const Blocks& k) {
    for (size_t i = 0; i < dst.size(); ++i) {
        std::copy_n(src[i].data(), src[i].size(), dst[i].data());
        kernels::axpy(dst[i].size(), alpha, k[i].data(), dst[i].data());
    }
}

void blocks_axpy(Blocks& dst, double alpha, const Blocks& k) {
    for (size_t i = 0; i < dst.size(); ++i) kernels::axpy(dst[i].size(), alpha, k[i].data(), dst[i].data());
}

struct Rk4Work {
    Blocks k1, k2, k3, k4, tmp;
    explicit Rk4Work(const Blocks& proto) : k1(proto), k2(proto), k3(proto), k4(proto), tmp(proto) {}
};

template <typename Deriv>
void rk4_step(Deriv&& f, double t, double h, Blocks& y, Rk4Work& w) {
    f(t, y, w.k1);
    blocks_set_axpy(w.tmp, y, 0.5 * h, w.k1);
    f(t + 0.5 * h, w.tmp, w.k2);
    blocks_set_axpy(w.tmp, y, 0.5 * h, w.k2);
    f(t + 0.5 * h, w.tmp, w.k3);
    blocks_set_axpy(w.tmp, y, h, w.k3);
    f(t + h, w.tmp, w.k4);
    blocks_axpy(y, h / 6.0, w.k1);
    blocks_axpy(y, h / 3.0, w.k2);
    blocks_axpy(y, h / 3.0, w.k3);
    blocks_axpy(y, h / 6.0, w.k4);
}

// Substeps for one output interval; step bound by the fast period and an
// optional user cap. Sampling omega at interior points covers ramps and
// sinusoidal profiles.
int substeps(const QuasiPeriodicGenerator& g, const IntegratorConfig& cfg, double ta, double tb) {
    double wmax = 0.0;
    for (int i = 0; i <= 4; ++i) wmax = std::max(wmax, g.phase().omega(ta + (tb - ta) * i / 4.0));
    double h = 2.0 * M_PI / (wmax * cfg.steps_per_fast_period);
    if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
    return std::max(1, static_cast<int>(std::ceil((tb - ta) / h - 1e-12)));
}

void check_cfg(const IntegratorConfig& cfg) {
    if (cfg.steps_per_fast_period < 8)
        throw StepTooLarge("integrator: steps_per_fast_period < 8 cannot resolve the fast period");
    if (cfg.t_grid.size() < 2) throw InvalidArgument("integrator: need at least two output times");
    for (size_t i = 1; i < cfg.t_grid.size(); ++i)
        if (cfg.t_grid[i] <= cfg.t_grid[i - 1])
            throw InvalidArgument("integrator: output grid not strictly increasing");
}

// Core fixed-step driver shared by all methods: integrates y across the
// output grid, invoking sink(grid_index, y) at every output time.
template <typename Deriv, typename Sink>
void integrate_grid(const QuasiPeriodicGenerator& g, const IntegratorConfig& cfg, Blocks& y,
                    Deriv&& f, Sink&& sink) {
    Rk4Work work(y);
    sink(0, y);
    for (size_t seg = 0; seg + 1 < cfg.t_grid.size(); ++seg) {
        const double ta = cfg.t_grid[seg], tb = cfg.t_grid[seg + 1];
        const int n = substeps(g, cfg, ta, tb);
        const double h = (tb - ta) / n;
        for (int s = 0; s < n; ++s) rk4_step(f, ta + s * h, h, y, work);
        sink(seg + 1, y);
    }
}

Operator to_operator(const Mat& m) { return Operator(m); }

} // namespace

Trajectory propagate_exact(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                           const IntegratorConfig& cfg) {
    check_cfg(cfg);
    if (rho0.dim() != g.dim()) throw DimensionMismatch("propagate_exact: state dimension");
    Blocks y{rho0.op().mat()};
    std::vector<Operator> out;
    out.reserve(cfg.t_grid.size());
    auto deriv = [&g](double t, const Blocks& state, Blocks& dy) {
        g.apply_at_phase(g.theta0() + g.phase().phi(t), t, state[0], dy[0]);
    };
    integrate_grid(g, cfg, y, deriv, [&out](size_t, const Blocks& s) { out.push_back(to_operator(s[0])); });
    return Trajectory(cfg.t_grid, std::move(out), MethodTag::exact);
}

double composition_check(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                         const IntegratorConfig& cfg, double t_mid, double t_end) {
    if (t_mid < 0.0 || t_mid > t_end) throw InvalidArgument("composition_check: need 0 <= t_mid <= t_end");
    IntegratorConfig direct = cfg;
    if (t_mid == 0.0 || t_mid == t_end) return 0.0; // degenerate split, same integration
    direct.t_grid = {0.0, t_mid, t_end};
    const Trajectory one = propagate_exact(g, rho0, direct);

    IntegratorConfig first = cfg;
    first.t_grid = {0.0, t_mid};
    const Trajectory stage1 = propagate_exact(g, rho0, first);

    IntegratorConfig second = cfg;
    second.t_grid = {t_mid, t_end};
    // Restart from the mid state; absolute time (and so the accumulated
    // phase) is carried by the grid, which is what this check exercises.
    const Trajectory stage2 = propagate_exact(g, stage1.states().back(), second);

    Mat diff = one.states().back().op().mat();
    kernels::add_scaled(diff, -1.0, stage2.states().back().op().mat());
    return kernels::max_abs(diff);
}

namespace {

Trajectory run_extended(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0, int n_max,
                        const IntegratorConfig& cfg, ExtendedState* final_blocks) {
    check_cfg(cfg);
    if (n_max < 1) throw InvalidArgument("propagate_extended: n_max >= 1 required");
    if (rho0.dim() != g.dim()) throw DimensionMismatch("propagate_extended: state dimension");
    const int d = g.dim();
    const int nb = 2 * n_max + 1;

    Blocks y(nb, Mat(d, d));
    y[static_cast<size_t>(n_max)] = rho0.op().mat(); // sigma^(0)(0) = rho(0)

    const auto& harmonics = g.harmonics();
    std::vector<const LinearSuperForm*> comps;
    comps.reserve(harmonics.size());
    for (int k : harmonics) comps.push_back(&g.component(k));

    auto deriv = [&](double t, const Blocks& state, Blocks& dy) {
        const double phi = g.phase().phi(t);
        std::vector<cd> phase_k(harmonics.size());
        for (size_t i = 0; i < harmonics.size(); ++i)
            phase_k[i] = std::exp(cd(0.0, harmonics[i] * phi));
#pragma omp parallel for schedule(static)
        for (int n = -n_max; n <= n_max; ++n) {
            Mat& row = dy[static_cast<size_t>(n + n_max)];
            std::fill_n(row.data(), row.size(), cd(0.0));
            for (size_t i = 0; i < harmonics.size(); ++i) {
                const int m = n - harmonics[i];
                if (m < -n_max || m > n_max) continue;
                comps[i]->apply(t, state[static_cast<size_t>(m + n_max)], row, phase_k[i], true);
            }
        }
    };

    std::vector<Operator> out;
    out.reserve(cfg.t_grid.size());
    auto reconstruct = [&](size_t, const Blocks& s) {
        Mat rho(d, d);
        for (int n = -n_max; n <= n_max; ++n) {
            const cd w = std::exp(cd(0.0, n * g.theta0()));
            kernels::axpy(rho.size(), w, s[static_cast<size_t>(n + n_max)].data(), rho.data());
        }
        out.push_back(Operator(std::move(rho)));
    };
    integrate_grid(g, cfg, y, deriv, reconstruct);

    if (final_blocks) {
        final_blocks->n_max = n_max;
        final_blocks->blocks.clear();
        const double phi_end = g.phase().phi(cfg.t_grid.back());
        for (int n = -n_max; n <= n_max; ++n) {
            Mat b = y[static_cast<size_t>(n + n_max)];
            kernels::scal(b.size(), std::exp(cd(0.0, -n * phi_end)), b.data());
            final_blocks->blocks.push_back(std::move(b)); // rho_F^(n) = e^{-i n phi} sigma^(n)
        }
    }
    return Trajectory(cfg.t_grid, std::move(out), MethodTag::extended_space, n_max);
}

} // namespace

Trajectory propagate_extended(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                              int n_max, const IntegratorConfig& cfg, bool verify_truncation) {
    Trajectory tr = run_extended(g, rho0, n_max, cfg, nullptr);
    if (verify_truncation) {
        const Trajectory tr2 = run_extended(g, rho0, 2 * n_max, cfg, nullptr);
        double worst = 0.0;
        for (size_t i = 0; i < tr.size(); ++i) {
            Mat diff = tr.states()[i].op().mat();
            kernels::add_scaled(diff, -1.0, tr2.states()[i].op().mat());
            worst = std::max(worst, kernels::max_abs(diff));
        }
        if (worst > tolerances().oracle_pointwise)
            throw TruncationNotConverged("propagate_extended: doubling n_max moves states by " +
                                         std::to_string(worst));
    }
    return tr;
}

ExtendedState propagate_extended_final_blocks(const QuasiPeriodicGenerator& g,
                                              const DensityMatrix& rho0, int n_max,
                                              const IntegratorConfig& cfg) {
    ExtendedState st;
    run_extended(g, rho0, n_max, cfg, &st);
    return st;
}

double step_halving_delta(const QuasiPeriodicGenerator& g, const DensityMatrix& rho0,
                          const IntegratorConfig& cfg, const Operator& obs) {
    const Trajectory coarse = propagate_exact(g, rho0, cfg);
    IntegratorConfig fine = cfg;
    fine.steps_per_fast_period *= 2;
    if (fine.max_step > 0.0) fine.max_step *= 0.5;
    const Trajectory dense = propagate_exact(g, rho0, fine);
    double worst = 0.0;
    for (size_t i = 0; i < coarse.size(); ++i)
        worst = std::max(worst, std::abs(expectation(obs, coarse.states()[i].op()) -
                                         expectation(obs, dense.states()[i].op())));
    return worst;
}

} // namespace floqgen
