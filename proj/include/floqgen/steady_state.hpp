#pragma once

#include "floqgen/operators.hpp"

namespace floqgen {

/// Trace-one Hermitian kernel element of a trace-annihilating superoperator.
/// SVD-based: the right singular vector of the smallest singular value,
/// hermitized and trace-normalized. Throws DegenerateKernel when the two
/// smallest singular values both fall below the degeneracy threshold and
/// NonNormalizable when the kernel vector is traceless.
DensityMatrix null_steady_state(const SuperOp& s, double tol_p = -1.0);

} // namespace floqgen
