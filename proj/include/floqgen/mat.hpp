#pragma once

#include <complex>
#include <vector>

#include "floqgen/errors.hpp"

namespace floqgen {

using cd = std::complex<double>;

/// Dense complex matrix, column-major (LAPACK layout). Column-major is
/// load-bearing here: column stacking of a d x d operator is then just the
/// raw storage order, so vectorize/devectorize are copies.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw InvalidArgument("Mat: negative dimension");
    }

    static Mat zeros(int rows, int cols) { return Mat(rows, cols); }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return a_.size(); }

    cd& operator()(int i, int j) { return a_[static_cast<size_t>(j) * rows_ + i]; }
    const cd& operator()(int i, int j) const { return a_[static_cast<size_t>(j) * rows_ + i]; }

    cd* data() { return a_.data(); }
    const cd* data() const { return a_.data(); }

    cd* col(int j) { return a_.data() + static_cast<size_t>(j) * rows_; }
    const cd* col(int j) const { return a_.data() + static_cast<size_t>(j) * rows_; }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cd> a_;
};

} // namespace floqgen
