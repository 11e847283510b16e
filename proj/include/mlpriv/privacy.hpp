// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/model.hpp"

#include <cstdint>

namespace mlpriv {

// Node privacy preferences: f_i in [0,1].  f_i = 0 keeps node i's edges at
// maximal secrecy (pure coin flips), f_i = 1 waives privacy entirely.
struct PrivacyProfile {
    Vector f;

    Index n() const { return f.size(); }
    void validate() const;

    static PrivacyProfile constant(Index n, double value);
};

// Keep probabilities theta(i,j) = (f_i f_j + 1) / 2, symmetric, in [1/2, 1].
struct FlipMatrix {
    Matrix theta;
};

// Per-edge privacy budgets eps(i,j) = log((1 + f_i f_j) / (1 - f_i f_j)),
// with +infinity exactly when f_i f_j = 1.
struct BudgetMatrix {
    Matrix eps;
};

// Flipped network shifted by (f_i f_j - 1)/2 per entry so that the
// expectation regains the block-model factorization scaled by f_i f_j.
struct DebiasedTensor {
    Tensor3 values;  // n x n x L, symmetric in modes 1/2
    PrivacyProfile profile;
};

FlipMatrix flip_matrix(const PrivacyProfile& profile);

// Constant theta over all pairs; theta must lie in [1/2, 1].
FlipMatrix constant_flip_matrix(Index n, double theta);

// Keep probability at privacy budget eps: e^eps / (1 + e^eps).
double uniform_theta(double eps);

// Inverse of the uniform budget: f with all-equal budgets eps, i.e.
// sqrt((e^eps - 1)/(e^eps + 1)).
double preference_from_epsilon(double eps);

// Randomized response: entry (i,j,l) is kept with probability theta(i,j) and
// replaced by its complement otherwise, one draw per (i,j,l) with i <= j; the
// mirror entry reuses the same draw.
MultiLayerNetwork flip_network(const MultiLayerNetwork& net, const FlipMatrix& theta,
                               std::uint64_t seed);

BudgetMatrix privacy_budget(const PrivacyProfile& profile);

// Recovers f_i from three pairwise budgets (i,i'), (i,j), (i',j) with
// distinct i, i', j.  Throws when the (i',j) budget is zero.
double preference_from_budgets(double eps_ii2, double eps_ij, double eps_i2j);

DebiasedTensor debias(const MultiLayerNetwork& flipped, const PrivacyProfile& profile);

// Entrywise division by f_i f_j; the result has the original probability
// tensor as its expectation.  Requires every f_i > 0; values are not clipped.
Tensor3 rescale_debias(const DebiasedTensor& t);

}  // namespace mlpriv
