#pragma once

#include "floqgen/operators.hpp"

namespace floqgen {

/// Matrix exponential by scaling-and-squaring with a degree-13 Pade core.
/// Superoperators here are non-normal, so no eigendecomposition route.
Mat expm(const Mat& m);

SuperOp superop_expm(const SuperOp& s);

} // namespace floqgen
