// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace mlpriv {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense order-3 tensor with mode-1 fibers contiguous:
// value(i, j, k) lives at data[i + I1 * (j + I2 * k)], all indices 0-based.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(Index i1, Index i2, Index i3, double fill = 0.0);

    Index dim(int mode) const;  // mode in {1,2,3}
    std::array<Index, 3> dims() const { return {i1_, i2_, i3_}; }
    Index size() const { return static_cast<Index>(values_.size()); }

    double& operator()(Index i, Index j, Index k) { return values_[i + i1_ * (j + i2_ * k)]; }
    double operator()(Index i, Index j, Index k) const { return values_[i + i1_ * (j + i2_ * k)]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    // Flat view as an Eigen column vector (same memory).
    Eigen::Map<const Vector> flat() const {
        return Eigen::Map<const Vector>(values_.data(), size());
    }

private:
    Index i1_ = 0, i2_ = 0, i3_ = 0;
    std::vector<double> values_;
};

// Mode-j matricization: I_j rows, prod of the other dims columns, with the
// column index m = (i_a - 1) + (i_b - 1) * I_a for the remaining modes a < b
// (1-based form: m = 1 + sum_{l != j} (i_l - 1) prod_{i < l, i != j} I_i).
Matrix matricize(const Tensor3& t, int mode);

// Inverse of matricize: reshapes an I_mode x (prod others) matrix back into a
// tensor whose mode-`mode` dimension is m.rows() and whose remaining dims are
// taken from `dims` in order.
Tensor3 fold(const Matrix& m, int mode, std::array<Index, 3> dims);

// Mode-j product t x_j m for m with m.cols() == dim(j); the result replaces
// dim(j) by m.rows().
Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode);

// Swap of the first two modes, layer by layer.
Tensor3 transpose12(const Tensor3& t);

// (t + transpose12(t)) / 2.
Tensor3 symmetrize12(const Tensor3& t);

bool is_semi_symmetric(const Tensor3& t, double tol = 0.0);

double frobenius_norm(const Tensor3& t);
double max_abs(const Tensor3& t);
bool all_finite(const Tensor3& t);

// Zero-copy mode-1 matricization (the native layout).
inline Eigen::Map<const Matrix> mode1_view(const Tensor3& t) {
    return Eigen::Map<const Matrix>(t.data(), t.dim(1), t.dim(2) * t.dim(3));
}

}  // namespace mlpriv
