// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace mlpriv {

Tensor3::Tensor3(Index i1, Index i2, Index i3, double fill)
    : i1_(i1), i2_(i2), i3_(i3), values_(static_cast<std::size_t>(i1 * i2 * i3), fill) {
    if (i1 <= 0 || i2 <= 0 || i3 <= 0)
        throw std::invalid_argument("Tensor3: dimensions must be positive");
}

Index Tensor3::dim(int mode) const {
    switch (mode) {
        case 1: return i1_;
        case 2: return i2_;
        case 3: return i3_;
        default: throw std::invalid_argument("Tensor3::dim: mode must be 1, 2 or 3");
    }
}

Matrix matricize(const Tensor3& t, int mode) {
    const Index i1 = t.dim(1), i2 = t.dim(2), i3 = t.dim(3);
    switch (mode) {
        case 1:
            // col = j + I2 * k: identical to the native layout.
            return mode1_view(t);
        case 2: {
            Matrix m(i2, i1 * i3);
#pragma omp parallel for schedule(static)
            for (Index k = 0; k < i3; ++k)
                for (Index j = 0; j < i2; ++j)
                    for (Index i = 0; i < i1; ++i) m(j, i + i1 * k) = t(i, j, k);
            return m;
        }
        case 3:
            // col = i + I1 * j: the transposed native layout.
            return Eigen::Map<const Matrix>(t.data(), i1 * i2, i3).transpose();
        default:
            throw std::invalid_argument("matricize: mode must be 1, 2 or 3");
    }
}

Tensor3 fold(const Matrix& m, int mode, std::array<Index, 3> dims) {
    dims[mode - 1] = m.rows();
    const Index i1 = dims[0], i2 = dims[1], i3 = dims[2];
    if (m.cols() != (mode == 1 ? i2 * i3 : mode == 2 ? i1 * i3 : i1 * i2))
        throw std::invalid_argument("fold: matrix shape does not match target dims");
    Tensor3 t(i1, i2, i3);
    switch (mode) {
        case 1:
            Eigen::Map<Matrix>(t.data(), i1, i2 * i3) = m;
            break;
        case 2: {
#pragma omp parallel for schedule(static)
            for (Index k = 0; k < i3; ++k)
                for (Index j = 0; j < i2; ++j)
                    for (Index i = 0; i < i1; ++i) t(i, j, k) = m(j, i + i1 * k);
            break;
        }
        case 3:
            Eigen::Map<Matrix>(t.data(), i1 * i2, i3) = m.transpose();
            break;
        default:
            throw std::invalid_argument("fold: mode must be 1, 2 or 3");
    }
    return t;
}

Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode) {
    const Index i1 = t.dim(1), i2 = t.dim(2), i3 = t.dim(3);
    if (mode < 1 || mode > 3) throw std::invalid_argument("mode_product: mode must be 1, 2 or 3");
    if (m.cols() != t.dim(mode))
        throw std::invalid_argument("mode_product: m.cols() must equal dim(mode)");
    const Index j = m.rows();
    switch (mode) {
        case 1: {
            Tensor3 out(j, i2, i3);
            Eigen::Map<Matrix>(out.data(), j, i2 * i3).noalias() = m * mode1_view(t);
            return out;
        }
        case 2: {
            // Per-slice GEMM: out(:,:,k) = t(:,:,k) * m^T.
            Tensor3 out(i1, j, i3);
#pragma omp parallel for schedule(static)
            for (Index k = 0; k < i3; ++k) {
                Eigen::Map<const Matrix> slice(t.data() + i1 * i2 * k, i1, i2);
                Eigen::Map<Matrix> oslice(out.data() + i1 * j * k, i1, j);
                oslice.noalias() = slice * m.transpose();
            }
            return out;
        }
        case 3: {
            Tensor3 out(i1, i2, j);
            Eigen::Map<const Matrix> unfolded(t.data(), i1 * i2, i3);
            Eigen::Map<Matrix>(out.data(), i1 * i2, j).noalias() = unfolded * m.transpose();
            return out;
        }
    }
    return {};
}

Tensor3 transpose12(const Tensor3& t) {
    const Index i1 = t.dim(1), i2 = t.dim(2), i3 = t.dim(3);
    Tensor3 out(i2, i1, i3);
#pragma omp parallel for schedule(static)
    for (Index k = 0; k < i3; ++k)
        for (Index j = 0; j < i2; ++j)
            for (Index i = 0; i < i1; ++i) out(j, i, k) = t(i, j, k);
    return out;
}

Tensor3 symmetrize12(const Tensor3& t) {
    if (t.dim(1) != t.dim(2))
        throw std::invalid_argument("symmetrize12: modes 1 and 2 must have equal dims");
    const Index n = t.dim(1), i3 = t.dim(3);
    Tensor3 out(n, n, i3);
#pragma omp parallel for schedule(static)
    for (Index k = 0; k < i3; ++k)
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i) out(i, j, k) = 0.5 * (t(i, j, k) + t(j, i, k));
    return out;
}

bool is_semi_symmetric(const Tensor3& t, double tol) {
    if (t.dim(1) != t.dim(2)) return false;
    const Index n = t.dim(1), i3 = t.dim(3);
    for (Index k = 0; k < i3; ++k)
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < j; ++i)
                if (std::abs(t(i, j, k) - t(j, i, k)) > tol) return false;
    return true;
}

double frobenius_norm(const Tensor3& t) {
    return t.flat().norm();
}

double max_abs(const Tensor3& t) {
    return t.size() == 0 ? 0.0 : t.flat().cwiseAbs().maxCoeff();
}

bool all_finite(const Tensor3& t) {
    return t.flat().allFinite();
}

}  // namespace mlpriv
