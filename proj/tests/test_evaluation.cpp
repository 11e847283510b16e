// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlpriv/evaluation.hpp"
#include "mlpriv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace mlpriv;

namespace {

// Brute-force permutation minimum of the scaled Hamming distance.
double brute_force_hamming(const std::vector<int>& c_hat, const std::vector<int>& c_star,
                           Index k) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1.0;
    do {
        Index mismatches = 0;
        for (std::size_t i = 0; i < c_hat.size(); ++i)
            if (perm[static_cast<std::size_t>(c_hat[i])] != c_star[i]) ++mismatches;
        best = std::min(best, static_cast<double>(mismatches) /
                                  static_cast<double>(c_hat.size()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<int> random_labels(Index n, Index k, std::uint64_t seed) {
    rng::Substream s(seed, rng::Purpose::kGeneric, 16);
    std::vector<int> c(static_cast<std::size_t>(n));
    for (auto& v : c) v = static_cast<int>(s.below(static_cast<std::uint64_t>(k)));
    return c;
}

DcMsbmParams unit_params(Index n, Index k, Index l) {
    DcMsbmParams p;
    p.n = n;
    p.K = k;
    p.L = l;
    p.labels.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) p.labels[static_cast<std::size_t>(i)] = static_cast<int>(i % k);
    p.degrees = Vector::Ones(n);
    p.core = Tensor3(k, k, l, 0.25);
    for (Index ll = 0; ll < l; ++ll)
        for (Index kk = 0; kk < k; ++kk) p.core(kk, kk, ll) = 0.75;
    return p;
}

}  // namespace

TEST_CASE("hamming error basics") {
    const std::vector<int> truth = {0, 0, 1, 1};
    CHECK(hamming_error(truth, truth, 2) == 0.0);
    const std::vector<int> swapped = {1, 1, 0, 0};
    CHECK(hamming_error(swapped, truth, 2) == 0.0);
    const std::vector<int> one_off = {0, 1, 1, 1};
    CHECK(hamming_error(one_off, truth, 2) == doctest::Approx(0.25));
    CHECK_THROWS_AS(hamming_error({0, 1}, {0}, 2), std::invalid_argument);
}

TEST_CASE("assignment matching equals brute force") {
    for (int trial = 0; trial < 1000; ++trial) {
        rng::Substream s(trial, rng::Purpose::kGeneric, 17);
        const Index k = 2 + static_cast<Index>(s.below(4));  // 2..5
        const Index n = k + static_cast<Index>(s.below(static_cast<std::uint64_t>(50 - k)));
        const std::vector<int> a = random_labels(n, k, 100000 + trial);
        const std::vector<int> b = random_labels(n, k, 200000 + trial);
        CHECK(hamming_error(a, b, k) == brute_force_hamming(a, b, k));
    }
}

TEST_CASE("hamming error is permutation-invariant and symmetric") {
    rng::Substream s(12, rng::Purpose::kGeneric, 18);
    for (int trial = 0; trial < 50; ++trial) {
        const Index k = 2 + static_cast<Index>(s.below(3));
        const std::vector<int> a = random_labels(40, k, 300000 + trial);
        const std::vector<int> b = random_labels(40, k, 400000 + trial);
        const double err = hamming_error(a, b, k);
        CHECK(err >= 0.0);
        CHECK(err <= 1.0);
        CHECK(err == hamming_error(b, a, k));
        // Relabel a by a fixed permutation.
        std::vector<int> pa = a;
        for (auto& v : pa) v = static_cast<int>((v + 1) % k);
        CHECK(hamming_error(pa, b, k) == err);
    }
}

TEST_CASE("diagnostics with unit parameters") {
    const Index n = 60, k = 3, l = 2;
    const DcMsbmParams p = unit_params(n, k, l);
    const PrivacyProfile f = PrivacyProfile::constant(n, 1.0);
    const DiagnosticsReport r = diagnostics(p, f);

    // Balanced communities of size n/K with f = d = 1.
    for (Index c = 0; c < k; ++c) {
        CHECK(r.gamma(c) == doctest::Approx(static_cast<double>(n) / k));
        CHECK(r.v(c) == doctest::Approx(1.0));
    }
    CHECK(r.psi_bar == doctest::Approx(1.0));
    CHECK(r.gamma.sum() == doctest::Approx(static_cast<double>(n) * r.psi_bar));
    // With f = 1, phi_n = 4 s_n (s_n defaults to the max core entry 0.75).
    CHECK(r.phi_n == doctest::Approx(4.0 * 0.75));
    CHECK(r.a1_balanced_sizes);
    CHECK_FALSE(r.v_infinite);
}

TEST_CASE("diagnostics flags vanishing f d products") {
    const Index n = 30, k = 2, l = 2;
    const DcMsbmParams p = unit_params(n, k, l);
    PrivacyProfile f = PrivacyProfile::constant(n, 0.9);
    f.f(3) = 0.0;
    const DiagnosticsReport r = diagnostics(p, f);
    CHECK(r.v_infinite);
    CHECK(std::isinf(r.v(p.labels[3])));
}

TEST_CASE("uniform regime check reports f_min^4 against the rate") {
    const Index n = 400, l = 8;
    DcMsbmParams p = unit_params(n, 2, l);
    p.sparsity = 1.0;
    for (Index ll = 0; ll < l; ++ll)
        for (Index k2 = 0; k2 < 2; ++k2)
            for (Index k1 = 0; k1 < 2; ++k1) p.core(k1, k2, ll) = k1 == k2 ? 0.5 : 0.25;
    const PrivacyProfile f = PrivacyProfile::constant(n, 0.9);
    const RegimeReport rep = corollary_regime_check(f, p, Scenario::kUniform);
    CHECK(rep.lhs == doctest::Approx(std::pow(0.9, 4.0)).epsilon(1e-12));
    CHECK(rep.rhs ==
          doctest::Approx(std::log(400.0) / (400.0 * 8.0 * 0.25)).epsilon(1e-12));
    CHECK(rep.holds);
}

TEST_CASE("polarized regime check") {
    const Index n = 500, l = 4;
    const DcMsbmParams p = unit_params(n, 4, l);

    // Constant profile: no strict-privacy group, left side zero.
    const RegimeReport uniform =
        corollary_regime_check(PrivacyProfile::constant(n, 0.9), p, Scenario::kPolarized);
    CHECK(uniform.beta_n == 0.0);
    CHECK(uniform.lhs == 0.0);
    CHECK(uniform.holds);

    // The polarized setting from the synthetic experiments: floor(2 n^a)
    // nodes at sqrt(log n / (n L)).
    const double a = 0.5;
    const Index m = static_cast<Index>(std::floor(2.0 * std::pow(static_cast<double>(n), a)));
    const double f_priv = std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n * l));
    PrivacyProfile f = PrivacyProfile::constant(n, 1.0);
    for (Index i = 0; i < m; ++i) f.f(i) = f_priv;
    const RegimeReport rep = corollary_regime_check(f, p, Scenario::kPolarized);
    const double beta = static_cast<double>(m) / n;
    CHECK(rep.beta_n == doctest::Approx(beta).epsilon(1e-12));
    CHECK(rep.alpha_n == doctest::Approx(f_priv).epsilon(1e-12));
    CHECK(rep.lhs == doctest::Approx(beta / (f_priv * f_priv * (1.0 - beta))).epsilon(1e-12));
}
