#pragma once

#include <random>

#include "floqgen/kernels.hpp"
#include "floqgen/mat.hpp"
#include "floqgen/operators.hpp"

namespace floqgen::test {

inline Mat random_mat(int rows, int cols, std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat m(rows, cols);
    for (size_t i = 0; i < m.size(); ++i) m.data()[i] = scale * cd(u(rng), u(rng));
    return m;
}

inline Operator random_operator(int dim, std::mt19937& rng, double scale = 1.0) {
    return Operator(random_mat(dim, dim, rng, scale));
}

inline Operator random_hermitian(int dim, std::mt19937& rng, double scale = 1.0) {
    Operator m = random_operator(dim, rng, scale);
    return cd(0.5) * (m + m.adjoint());
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    Mat d = a;
    kernels::add_scaled(d, -1.0, b);
    return kernels::max_abs(d);
}

} // namespace floqgen::test
