// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/tensor.hpp"

#include <cstdint>
#include <vector>

namespace mlpriv {

// Degree-corrected multi-layer stochastic block model: the edge probability
// between nodes i and j in layer l is d_i * d_j * s * B(c_i, c_j, l).
struct DcMsbmParams {
    Index n = 0;
    Index L = 0;
    Index K = 0;
    std::vector<int> labels;  // length n, values in [0, K)
    Vector degrees;           // length n, positive
    Tensor3 core;             // K x K x L, entries in [0,1], symmetric in modes 1/2
    double sparsity = 1.0;    // scale multiplying the core

    // Throws std::invalid_argument on any violated invariant, including
    // d_i * d_j * sparsity * B > 1 for some admissible (i, j, l).
    void validate() const;
};

struct MultiLayerNetwork {
    Index n = 0;
    Index L = 0;
    Tensor3 adjacency;  // n x n x L, {0,1}, symmetric in modes 1/2
};

// One-hot membership matrix Z (n x K) from a label vector.
Matrix membership_matrix(const std::vector<int>& labels, Index K);

// P(i,j,l) = d_i d_j s B(c_i,c_j,l); errors if any entry exceeds 1.
Tensor3 probability_tensor(const DcMsbmParams& params);

// Independent Bernoulli draws for i <= j (diagonal included), mirrored below.
MultiLayerNetwork sample_network(const Tensor3& prob, std::uint64_t seed);

struct Synthetic {
    MultiLayerNetwork network;
    DcMsbmParams params;
};

// Synthetic generator: labels uniform over [K], degrees ~ Unif(0.5, 1), core
// B(k1,k2,l) = 0.5 * 1{k1==k2} + b with b ~ Unif(0, 0.5) drawn once per
// unordered pair (k1,k2) and mirrored.
Synthetic generate_synthetic(Index n, Index K, Index L, std::uint64_t seed);

}  // namespace mlpriv
