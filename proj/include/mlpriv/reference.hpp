// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/privacy.hpp"

#include <cstdint>

// Serial reference implementations of the parallel kernels, written straight
// from the definitions.  Kept for testing (the unit and acceptance suites
// check the OpenMP kernels against these) and for the benchmark baseline.
namespace mlpriv::ref {

// Mode-j matricization via the literal index formula
// m = 1 + sum_{l != j} (i_l - 1) prod_{i < l, i != j} I_i.
Matrix matricize(const Tensor3& t, int mode);

// Mode-j product by direct summation over the contracted index.
Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode);

Tensor3 probability_tensor(const DcMsbmParams& params);

MultiLayerNetwork sample_network(const Tensor3& prob, std::uint64_t seed);

MultiLayerNetwork flip_network(const MultiLayerNetwork& net, const FlipMatrix& theta,
                               std::uint64_t seed);

DebiasedTensor debias(const MultiLayerNetwork& flipped, const PrivacyProfile& profile);

// Full SVD by one-sided Jacobi rotations; independent of the Eigen-backed
// implementation path and accurate to ~1e-13 relative for modest sizes.
struct FullSvd {
    Matrix u;
    Vector s;
    Matrix v;
};
FullSvd jacobi_svd(const Matrix& m);

}  // namespace mlpriv::ref
