// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlpriv/detection.hpp"
#include "mlpriv/evaluation.hpp"
#include "mlpriv/rng.hpp"
#include "mlpriv/tucker.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace mlpriv;

namespace {

Tensor3 noiseless_debiased(const DcMsbmParams& params, const Vector& f) {
    const Tensor3 p = probability_tensor(params);
    Tensor3 out(params.n, params.n, params.L);
    for (Index l = 0; l < params.L; ++l)
        for (Index j = 0; j < params.n; ++j)
            for (Index i = 0; i < params.n; ++i) out(i, j, l) = f(i) * f(j) * p(i, j, l);
    return out;
}

// Independent geometric median for the brute-force oracle: plain Weiszfeld,
// no shared code with the library path.
Eigen::RowVectorXd oracle_median(const std::vector<Eigen::RowVectorXd>& pts) {
    Eigen::RowVectorXd y = Eigen::RowVectorXd::Zero(pts.front().size());
    for (const auto& p : pts) y += p;
    y /= static_cast<double>(pts.size());
    for (int it = 0; it < 500; ++it) {
        Eigen::RowVectorXd num = Eigen::RowVectorXd::Zero(y.size());
        double den = 0.0;
        for (const auto& p : pts) {
            const double d = std::max((p - y).norm(), 1e-13);
            num += p / d;
            den += 1.0 / d;
        }
        const Eigen::RowVectorXd next = num / den;
        if ((next - y).norm() < 1e-12) {
            y = next;
            break;
        }
        y = next;
    }
    return y;
}

// Exhaustive optimum of the l_{2,1} K-medians objective over all 2-labelings.
double oracle_best_2partition(const Matrix& x) {
    const Index n = x.rows();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<Eigen::RowVectorXd> g0, g1;
        for (Index i = 0; i < n; ++i) ((mask >> i) & 1u ? g1 : g0).push_back(x.row(i));
        double cost = 0.0;
        for (const auto* g : {&g0, &g1}) {
            if (g->empty()) continue;
            const Eigen::RowVectorXd c = oracle_median(*g);
            for (const auto& p : *g) cost += (p - c).norm();
        }
        best = std::min(best, cost);
    }
    return best;
}

}  // namespace

TEST_CASE("normalize_rows") {
    Matrix u(3, 2);
    u << 3.0, 4.0, 0.0, 0.0, 0.6, 0.8;
    const RowNormalized norm = normalize_rows(u);
    CHECK(norm.rows(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(norm.rows(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(norm.is_zero[1] == 1);
    CHECK(norm.rows.row(1).norm() == 0.0);
    CHECK(norm.is_zero[0] == 0);
    // Idempotence on already-unit rows.
    const RowNormalized twice = normalize_rows(norm.rows);
    CHECK((twice.rows.row(2) - norm.rows.row(2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("k_medians separates repeated unit vectors exactly") {
    const Index k = 3, m = 7;
    Matrix x(k * m, k);
    x.setZero();
    for (Index c = 0; c < k; ++c)
        for (Index r = 0; r < m; ++r) x(c * m + r, c) = 1.0;
    const KMediansResult res = k_medians(x, k, 0.1, 5, 42);
    CHECK(res.objective == doctest::Approx(0.0).epsilon(1e-12));
    for (Index c = 0; c < k; ++c)
        for (Index r = 1; r < m; ++r)
            CHECK(res.labels[static_cast<std::size_t>(c * m + r)] ==
                  res.labels[static_cast<std::size_t>(c * m)]);
}

TEST_CASE("k_medians is (1+tau)-close to the exhaustive optimum") {
    rng::Substream s(7, rng::Purpose::kGeneric, 11);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 5 + static_cast<Index>(s.below(4));  // 5..8
        Matrix x(n, 2);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < 2; ++j) x(i, j) = s.uniform(-1.0, 1.0);
        const KMediansResult res = k_medians(x, 2, 0.01, 10, 1000 + trial);
        const double opt = oracle_best_2partition(x);
        CHECK(res.objective >= opt - 1e-7);
        CHECK(res.objective <= (1.0 + 0.01) * opt + 1e-7);
    }
}

TEST_CASE("duplicating every point doubles the objective of a solution") {
    rng::Substream s(9, rng::Purpose::kGeneric, 12);
    Matrix x(10, 3);
    for (Index i = 0; i < 10; ++i)
        for (Index j = 0; j < 3; ++j) x(i, j) = s.uniform(-1.0, 1.0);
    const KMediansResult res = k_medians(x, 2, 0.1, 5, 3);
    Matrix xx(20, 3);
    xx << x, x;
    std::vector<int> labels2 = res.labels;
    labels2.insert(labels2.end(), res.labels.begin(), res.labels.end());
    CHECK(l21_cost(xx, labels2, res.centers) ==
          doctest::Approx(2.0 * l21_cost(x, res.labels, res.centers)).epsilon(1e-12));
}

TEST_CASE("k_medians objective trace is nonincreasing") {
    rng::Substream s(13, rng::Purpose::kGeneric, 13);
    Matrix x(60, 4);
    for (Index i = 0; i < 60; ++i)
        for (Index j = 0; j < 4; ++j) x(i, j) = s.uniform(-1.0, 1.0);
    const KMediansResult res = k_medians(x, 4, 0.1, 8, 17);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
        CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12);
    CHECK(res.converged);
}

TEST_CASE("degenerate input: fewer distinct rows than clusters") {
    Matrix x(6, 2);
    x << 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1;
    const KMediansResult res = k_medians(x, 3, 0.1, 4, 5);
    CHECK(res.degenerate);
    CHECK(res.objective <= 1e-12);
}

TEST_CASE("Lemma-4 geometry of the noiseless embedding") {
    const Index n = 90, K = 3, L = 6;
    const Synthetic syn = generate_synthetic(n, K, L, 314);
    rng::Substream s(27, rng::Purpose::kGeneric, 14);
    Vector f(n);
    for (Index i = 0; i < n; ++i) f(i) = s.uniform(0.5, 1.0);
    const Tensor3 pt = noiseless_debiased(syn.params, f);

    TuckerOptions opts;
    opts.shared_mode12 = true;
    const TuckerFactors tf = tucker(pt, {K, K, std::min<Index>(K * (K + 1) / 2, L)}, opts);
    const RowNormalized norm = normalize_rows(tf.u);

    const double sqrt2 = std::sqrt(2.0);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double d = (norm.rows.row(i) - norm.rows.row(j)).norm();
            if (syn.params.labels[static_cast<std::size_t>(i)] ==
                syn.params.labels[static_cast<std::size_t>(j)])
                CHECK(d <= 1e-8);
            else
                CHECK(std::abs(d - sqrt2) <= 1e-8);
        }
}

TEST_CASE("noiseless detection recovers the labels exactly") {
    const Index n = 90, K = 3, L = 6;
    const Synthetic syn = generate_synthetic(n, K, L, 2718);
    const Vector f = Vector::Constant(n, 0.9);
    const Tensor3 pt = noiseless_debiased(syn.params, f);
    const DetectionResult det = detect(pt, K, 0.1, 10, 1);
    CHECK(hamming_error(det.labels, syn.params.labels, K) == 0.0);
}

TEST_CASE("K = 1 assigns everyone to the same community") {
    const Synthetic syn = generate_synthetic(20, 1, 2, 5);
    const Tensor3 pt = noiseless_debiased(syn.params, Vector::Ones(20));
    const DetectionResult det = detect(pt, 1, 0.1, 3, 2);
    for (int c : det.labels) CHECK(c == 0);
}

TEST_CASE("node permutation permutes the labels") {
    const Index n = 60, K = 3, L = 4;
    const Synthetic syn = generate_synthetic(n, K, L, 161);
    const Tensor3 pt = noiseless_debiased(syn.params, Vector::Constant(n, 0.8));

    std::vector<Index> perm(static_cast<std::size_t>(n));
    rng::Substream s(3, rng::Purpose::kGeneric, 15);
    for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (Index i = n - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(s.below(static_cast<std::uint64_t>(i + 1)))]);
    Tensor3 pp(n, n, L);
    std::vector<int> plabels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        plabels[static_cast<std::size_t>(i)] =
            syn.params.labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    for (Index l = 0; l < L; ++l)
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                pp(i, j, l) =
                    pt(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)], l);

    const DetectionResult det = detect(pp, K, 0.1, 10, 7);
    CHECK(hamming_error(det.labels, plabels, K) == 0.0);
}

TEST_CASE("detection is invariant to a global degree rescaling") {
    // d -> alpha d, B -> B / alpha^2 leaves the noiseless assignments fixed.
    const Index n = 60, K = 2, L = 3;
    Synthetic syn = generate_synthetic(n, K, L, 99);
    const Tensor3 pt = noiseless_debiased(syn.params, Vector::Constant(n, 0.9));
    DcMsbmParams scaled = syn.params;
    const double alpha = 1.25;
    scaled.degrees *= alpha;
    for (Index l = 0; l < L; ++l)
        for (Index k2 = 0; k2 < K; ++k2)
            for (Index k1 = 0; k1 < K; ++k1) scaled.core(k1, k2, l) /= alpha * alpha;
    const Tensor3 pt2 = noiseless_debiased(scaled, Vector::Constant(n, 0.9));

    const DetectionResult a = detect(pt, K, 0.1, 10, 11);
    const DetectionResult b = detect(pt2, K, 0.1, 10, 11);
    CHECK(hamming_error(a.labels, b.labels, K) == 0.0);
}

TEST_CASE("detect validates its arguments") {
    const Synthetic syn = generate_synthetic(10, 2, 2, 1);
    const Tensor3 pt = noiseless_debiased(syn.params, Vector::Ones(10));
    CHECK_THROWS_AS(detect(pt, 11, 0.1, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(detect(pt, 0, 0.1, 2, 0), std::invalid_argument);
}

TEST_CASE("scree estimate finds K on a noiseless model") {
    const Index n = 80, K = 2, L = 4;
    const Synthetic syn = generate_synthetic(n, K, L, 555);
    const Tensor3 p = probability_tensor(syn.params);
    const ScreeReport report = estimate_k(p, 6);
    CHECK(report.suggested_k == K);
    CHECK(report.kappa == 6);
    for (Index i = 1; i < report.singular_values.size(); ++i)
        CHECK(report.singular_values(i) <= report.singular_values(i - 1) + 1e-12);
    CHECK(report.suggested_k < report.kappa);
}

TEST_CASE("scree estimate on a sampled network") {
    const Index n = 120, K = 2, L = 4;
    const Synthetic syn = generate_synthetic(n, K, L, 808);
    const ScreeReport report = estimate_k(syn.network, 6);
    CHECK(report.suggested_k == K);
}
