// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/privacy.hpp"

#include <cstdint>
#include <vector>

namespace mlpriv {

struct RowNormalized {
    Matrix rows;                        // unit rows; zero rows passed through
    std::vector<std::uint8_t> is_zero;  // rows with norm < 1e-12, flagged
};

RowNormalized normalize_rows(const Matrix& u);

struct KMediansResult {
    std::vector<int> labels;  // length n, values in [0, K)
    Matrix centers;           // K x d
    double objective;         // sum_i ||x_i - centers(labels_i)|| (the l_{2,1} cost)
    bool converged = false;
    bool degenerate = false;             // fewer than K distinct rows
    std::vector<double> objective_trace; // nonincreasing within the winning restart
};

// Alternating K-medians: farthest-point seeding, exact nearest-center
// assignment, geometric-median center updates (iteratively reweighted
// averaging).  Best of `restarts` independent runs wins; ties break on the
// lowest restart index.  tau is the caller's (1+tau) target and is carried
// through for reporting only - the achieved objective is what counts.
KMediansResult k_medians(const Matrix& x, Index k, double tau, int restarts, std::uint64_t seed);

// l_{2,1} cost of an explicit solution; used by diagnostics and tests.
double l21_cost(const Matrix& x, const std::vector<int>& labels, const Matrix& centers);

struct DetectionResult {
    std::vector<int> labels;      // length n, values in [0, K)
    Matrix membership;            // n x K one-hot
    Matrix embedding;             // U_hat, n x K
    Matrix normalized_embedding;  // U_tilde, n x K (zero rows flagged)
    std::vector<std::uint8_t> zero_rows;
    Matrix centers;  // K x K
    double objective;
    double tau;
    bool converged = false;  // tucker and k-medians both converged
    bool mode3_rank_truncated = false;
    Index mode3_rank = 0;  // effective mode-3 rank used
};

// Algorithm: semi-symmetric Tucker with ranks (K, K, min{K(K+1)/2, L}) on the
// debiased tensor, row normalization of the shared factor, then K-medians.
DetectionResult detect(const Tensor3& debiased, Index k, double tau = 0.1, int restarts = 10,
                       std::uint64_t seed = 0);
DetectionResult detect(const DebiasedTensor& t, Index k, double tau = 0.1, int restarts = 10,
                       std::uint64_t seed = 0);

struct ScreeReport {
    Index kappa;
    Vector singular_values;  // leading min(2 kappa, n) values, nonincreasing
    Index suggested_k;       // argmax_k sigma_k / sigma_{k+1} over 1 <= k < kappa
};

// Scree diagnostic for choosing K: Tucker at rank (kappa, kappa, L), project
// mode 3 onto the fitted factor, and inspect the leading singular values of
// the mode-1 matricization.
ScreeReport estimate_k(const Tensor3& t, Index kappa);
ScreeReport estimate_k(const MultiLayerNetwork& net, Index kappa);

}  // namespace mlpriv
