// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/tensor.hpp"

#include <vector>

namespace mlpriv {

struct TuckerOptions {
    double tol = 1e-6;   // stop when the residual drop per sweep falls below tol * ||t||_F
    int max_iter = 50;
    bool shared_mode12 = false;  // one factor for modes 1 and 2 (input is symmetrized first)
};

struct TuckerFactors {
    Tensor3 core;  // r1 x r2 x r3
    Matrix u;      // I1 x r1
    Matrix v;      // I2 x r2 (== u when shared_mode12)
    Matrix w;      // I3 x r3
    bool shared_mode12 = false;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;                  // Frobenius reconstruction error of the best iterate
    std::vector<double> residual_history;   // accepted sweeps, nonincreasing
    bool mode3_rank_truncated = false;      // r3 was reduced to the numerical mode-3 rank
};

// Tucker decomposition via HOSVD initialization + HOOI sweeps.  With
// shared_mode12 the input is symmetrized over modes 1/2 once and a single
// factor is fitted for both modes; the residual is reported against the
// symmetrized tensor.  Non-convergence is not an error: the best iterate is
// returned with converged == false.
TuckerFactors tucker(const Tensor3& t, std::array<Index, 3> ranks, const TuckerOptions& opts = {});

Tensor3 tucker_reconstruct(const TuckerFactors& f);

}  // namespace mlpriv
