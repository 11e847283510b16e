// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mlpriv/model.hpp"
#include "mlpriv/privacy.hpp"

#include <limits>
#include <string>
#include <vector>

namespace mlpriv {

// Minimum scaled Hamming distance between two label vectors: the fraction of
// disagreeing nodes minimized over all permutations of the K labels, computed
// exactly via optimal assignment on the K x K confusion matrix.
double hamming_error(const std::vector<int>& c_hat, const std::vector<int>& c_star, Index k);

// Max-weight assignment on a square nonnegative matrix; returns the column
// matched to each row.  Exposed for the evaluation tests.
std::vector<Index> max_assignment(const Matrix& weights);

struct DiagnosticsOptions {
    // Sparsity s_n; NaN means "use the max entry of the (scaled) core".
    double sn = std::numeric_limits<double>::quiet_NaN();
    // Finite-sample constants for the assumption flags.
    double c1 = 4.0;   // community-size balance ratio
    double c2 = 4.0;   // effective-size balance ratio and row bound
    double c3 = 1.0;   // sparsity lower-bound multiplier
    double c4 = 0.1;   // mode-3 signal multiplier
};

struct DiagnosticsReport {
    Vector gamma;       // effective community sizes: sum_{c_i = k} (f_i d_i)^2
    double psi_bar;     // n^{-1} sum_i (f_i d_i)^2
    double phi_n;       // 1 - min_i f_i + 4 s_n
    Vector v;           // v_k = n_k^{-2} sum_{c_i = k} gamma_k / (f_i d_i)^2
    bool v_infinite;    // some f_i d_i = 0
    double bound;       // rate value (sum_k v_k)^{1/2} sqrt(phi_n log n) / (sqrt(nL) s_n psi_bar)
    double sigma_min_core;  // smallest nonzero singular value of the mode-3 matricized core
    double sn;
    // Assumption flags at the configured constants, with the measured ratios.
    bool a1_balanced_sizes;
    double size_ratio;  // n_max / n_min
    bool a2_balanced_gamma;
    double gamma_ratio;     // gamma_max / gamma_min
    double row_bound_max;   // max_i f_i^2 d_i^2 n_{c_i} / gamma_{c_i}
    bool a3_sparsity;
    double sparsity_rhs;    // (1/psi_bar) sqrt(phi_n log n / (nL))
    bool a4_signal;
    double signal_rhs;      // sqrt(L) s_n
};

DiagnosticsReport diagnostics(const DcMsbmParams& params, const PrivacyProfile& profile,
                              const DiagnosticsOptions& opts = {});

std::string format_diagnostics(const DiagnosticsReport& report);

enum class Scenario { kUniform, kPolarized };

struct RegimeReport {
    Scenario scenario;
    double lhs;
    double rhs;
    bool holds;
    // Populated for the polarized scenario.
    double alpha_n = 0.0;  // typical preference of the small-f group
    double beta_n = 0.0;   // fraction of nodes in the small-f group
};

// Finite-sample proxy for the two consistency regimes: uniform preferences
// compare f_min^4 against log n / (n L s_n^2); polarized preferences compare
// beta_n / (alpha_n^2 (1 - beta_n)) against n L s_n^2 / log n.
RegimeReport corollary_regime_check(const PrivacyProfile& profile, const DcMsbmParams& params,
                                    Scenario scenario);

}  // namespace mlpriv
