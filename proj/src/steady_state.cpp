#include "floqgen/steady_state.hpp"

#include <cmath>
#include <cstring>

#include "floqgen/lapack.hpp"

namespace floqgen {

DensityMatrix null_steady_state(const SuperOp& s, double tol_p) {
    const Tolerances& tol = tolerances();
    const int d = s.dim(), d2 = d * d;
    auto svd = lapack::svd(s.mat());
    const double smax = svd.s.front();
    if (smax <= 0.0) throw DegenerateKernel("null_steady_state: zero superoperator");
    if (d2 >= 2 && svd.s[d2 - 2] < tol.kernel_degeneracy_ratio * smax)
        throw DegenerateKernel("null_steady_state: kernel numerically degenerate");

    // Smallest right singular vector = last row of V^H, conjugated.
    std::vector<cd> v(d2);
    for (int c = 0; c < d2; ++c) v[c] = std::conj(svd.vh(d2 - 1, c));
    Operator k = devectorize(v, d);

    const cd tr = k.trace();
    if (std::abs(tr) < 1e-10 * kernels::fro_norm(k.mat()))
        throw NonNormalizable("null_steady_state: kernel vector is traceless");

    DensityMatrix rho = DensityMatrix::hermitized(cd(1.0) / tr * k, tol_p);

    // Residual check: the returned state really is annihilated by s.
    const Operator res = s.apply(rho.op());
    const double rnorm = kernels::max_abs(res.mat());
    if (rnorm > tol.kernel_residual * std::max(1.0, smax))
        throw NumericError("null_steady_state: residual " + std::to_string(rnorm));
    return rho;
}

} // namespace floqgen
