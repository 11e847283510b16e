// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/model.hpp"

#include "mlpriv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlpriv {

using rng::Purpose;
using rng::Substream;

void DcMsbmParams::validate() const {
    if (n < 1 || L < 1 || K < 1 || n < K)
        throw std::invalid_argument("DcMsbmParams: need n >= K >= 1 and L >= 1");
    if (static_cast<Index>(labels.size()) != n || degrees.size() != n)
        throw std::invalid_argument("DcMsbmParams: labels/degrees must have length n");
    if (core.dim(1) != K || core.dim(2) != K || core.dim(3) != L)
        throw std::invalid_argument("DcMsbmParams: core must be K x K x L");
    if (sparsity <= 0) throw std::invalid_argument("DcMsbmParams: sparsity must be positive");

    std::vector<char> seen(static_cast<std::size_t>(K), 0);
    for (int c : labels) {
        if (c < 0 || c >= K) throw std::invalid_argument("DcMsbmParams: label out of range");
        seen[static_cast<std::size_t>(c)] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw std::invalid_argument("DcMsbmParams: every community must be non-empty");

    for (Index i = 0; i < n; ++i)
        if (!(degrees(i) > 0)) throw std::invalid_argument("DcMsbmParams: degrees must be positive");

    for (Index l = 0; l < L; ++l)
        for (Index k2 = 0; k2 < K; ++k2)
            for (Index k1 = 0; k1 < K; ++k1) {
                const double b = core(k1, k2, l);
                if (!(b >= 0.0 && b <= 1.0))
                    throw std::invalid_argument("DcMsbmParams: core entries must lie in [0,1]");
                if (b != core(k2, k1, l))
                    throw std::invalid_argument("DcMsbmParams: core must be symmetric in modes 1/2");
            }

    // Largest degree per community bounds d_i d_j s B over all pairs.
    Vector dmax = Vector::Zero(K);
    for (Index i = 0; i < n; ++i)
        dmax(labels[static_cast<std::size_t>(i)]) =
            std::max(dmax(labels[static_cast<std::size_t>(i)]), degrees(i));
    for (Index l = 0; l < L; ++l)
        for (Index k2 = 0; k2 < K; ++k2)
            for (Index k1 = 0; k1 < K; ++k1)
                if (dmax(k1) * dmax(k2) * sparsity * core(k1, k2, l) > 1.0)
                    throw std::invalid_argument(
                        "DcMsbmParams: d_i d_j s B exceeds 1 for some pair");
}

Matrix membership_matrix(const std::vector<int>& labels, Index K) {
    Matrix z = Matrix::Zero(static_cast<Index>(labels.size()), K);
    for (Index i = 0; i < z.rows(); ++i) z(i, labels[static_cast<std::size_t>(i)]) = 1.0;
    return z;
}

Tensor3 probability_tensor(const DcMsbmParams& params) {
    params.validate();
    const Index n = params.n, L = params.L;
    Tensor3 p(n, n, L);
#pragma omp parallel for schedule(static)
    for (Index l = 0; l < L; ++l)
        for (Index j = 0; j < n; ++j) {
            const int cj = params.labels[static_cast<std::size_t>(j)];
            for (Index i = 0; i < n; ++i) {
                const int ci = params.labels[static_cast<std::size_t>(i)];
                p(i, j, l) = params.degrees(i) * params.degrees(j) * params.sparsity *
                             params.core(ci, cj, l);
            }
        }
    if (max_abs(p) > 1.0) throw std::invalid_argument("probability_tensor: entry exceeds 1");
    return p;
}

MultiLayerNetwork sample_network(const Tensor3& prob, std::uint64_t seed) {
    const Index n = prob.dim(1), L = prob.dim(3);
    if (prob.dim(2) != n) throw std::invalid_argument("sample_network: prob must be n x n x L");
    if (!is_semi_symmetric(prob)) throw std::invalid_argument("sample_network: prob not symmetric");
    const double lo = prob.flat().minCoeff(), hi = prob.flat().maxCoeff();
    if (lo < 0.0 || hi > 1.0)
        throw std::invalid_argument("sample_network: probabilities must lie in [0,1]");

    MultiLayerNetwork net;
    net.n = n;
    net.L = L;
    net.adjacency = Tensor3(n, n, L);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            Substream s(seed, Purpose::kSample,
                        rng::pack2(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
            for (Index l = 0; l < L; ++l) {
                const double a = s.bernoulli(prob(i, j, l)) ? 1.0 : 0.0;
                net.adjacency(i, j, l) = a;
                net.adjacency(j, i, l) = a;
            }
        }
    }
    return net;
}

Synthetic generate_synthetic(Index n, Index K, Index L, std::uint64_t seed) {
    if (n < K || K < 1 || L < 1)
        throw std::invalid_argument("generate_synthetic: need n >= K >= 1 and L >= 1");

    DcMsbmParams params;
    params.n = n;
    params.L = L;
    params.K = K;

    // Uniform labels; redraw the vector until every community is hit (the
    // validate() invariant; a redraw is vanishingly rare for n >> K).
    params.labels.resize(static_cast<std::size_t>(n));
    for (std::uint64_t attempt = 0;; ++attempt) {
        Substream s(seed, Purpose::kLabels, attempt);
        std::vector<char> seen(static_cast<std::size_t>(K), 0);
        for (Index i = 0; i < n; ++i) {
            const int c = static_cast<int>(s.below(static_cast<std::uint64_t>(K)));
            params.labels[static_cast<std::size_t>(i)] = c;
            seen[static_cast<std::size_t>(c)] = 1;
        }
        if (std::find(seen.begin(), seen.end(), 0) == seen.end()) break;
    }

    Substream sd(seed, Purpose::kDegrees);
    params.degrees.resize(n);
    for (Index i = 0; i < n; ++i) params.degrees(i) = sd.uniform(0.5, 1.0);

    params.core = Tensor3(K, K, L);
    for (Index l = 0; l < L; ++l)
        for (Index k1 = 0; k1 < K; ++k1)
            for (Index k2 = k1; k2 < K; ++k2) {
                Substream sb(seed, Purpose::kCoreTensor,
                             rng::pack3(static_cast<std::uint64_t>(k1),
                                        static_cast<std::uint64_t>(k2),
                                        static_cast<std::uint64_t>(l)));
                const double b = sb.uniform(0.0, 0.5);
                const double value = (k1 == k2 ? 0.5 : 0.0) + b;
                params.core(k1, k2, l) = value;
                params.core(k2, k1, l) = value;
            }

    Synthetic out;
    out.params = params;
    out.network = sample_network(probability_tensor(params), seed);
    return out;
}

}  // namespace mlpriv
