// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/tensor.hpp"

namespace mlpriv {

// Thin SVD truncated to `rank`: m ~= u * s.asDiagonal() * v.transpose().
struct Svd {
    Matrix u;  // rows x rank, orthonormal columns
    Vector s;  // rank, nonincreasing, nonnegative
    Matrix v;  // cols x rank, orthonormal columns
};

// Deterministic sign convention: the largest-magnitude entry of each column
// of u is made positive (first such entry wins ties); v follows.
void fix_signs(Matrix& u, Matrix* v);

Svd truncated_svd(const Matrix& m, Index rank);

// Leading left singular vectors only.  Falls back to an eigendecomposition of
// the Gram matrix m * m^T when the input is much wider than tall, which is
// the shape of every large matricization in this project.
Matrix leading_left_vectors(const Matrix& m, Index rank);

// All singular values of m, nonincreasing, via the cheaper of the two Gram
// matrices.  Intended for scree/diagnostic output, not for small-value
// precision.
Vector singular_values_gram(const Matrix& m);

}  // namespace mlpriv
