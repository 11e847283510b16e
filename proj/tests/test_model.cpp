// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlpriv/model.hpp"
#include "mlpriv/reference.hpp"
#include "mlpriv/rng.hpp"

#include <cmath>

using namespace mlpriv;

TEST_CASE("single community with unit degrees is constant") {
    DcMsbmParams p;
    p.n = 4;
    p.L = 2;
    p.K = 1;
    p.labels = {0, 0, 0, 0};
    p.degrees = Vector::Ones(4);
    p.core = Tensor3(1, 1, 2, 0.3);
    const Tensor3 prob = probability_tensor(p);
    CHECK(prob.flat().minCoeff() == doctest::Approx(0.3));
    CHECK(prob.flat().maxCoeff() == doctest::Approx(0.3));
}

TEST_CASE("probability entries follow d_i d_j B(c_i,c_j,l)") {
    DcMsbmParams p;
    p.n = 2;
    p.L = 1;
    p.K = 2;
    p.labels = {0, 1};
    p.degrees = Vector(2);
    p.degrees << 0.5, 1.0;
    p.core = Tensor3(2, 2, 1);
    p.core(0, 0, 0) = 0.6;
    p.core(1, 1, 0) = 0.7;
    p.core(0, 1, 0) = 0.8;
    p.core(1, 0, 0) = 0.8;
    const Tensor3 prob = probability_tensor(p);
    CHECK(prob(0, 1, 0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(prob(1, 0, 0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(is_semi_symmetric(prob));
}

TEST_CASE("probability tensor equals B x1 DZ x2 DZ") {
    const Synthetic syn = generate_synthetic(25, 3, 4, 7);
    const Tensor3 direct = probability_tensor(syn.params);
    Matrix dz = membership_matrix(syn.params.labels, syn.params.K);
    for (Index i = 0; i < syn.params.n; ++i) dz.row(i) *= syn.params.degrees(i);
    const Tensor3 via_products =
        mode_product(mode_product(syn.params.core, dz, 1), dz, 2);
    CHECK((direct.flat() - via_products.flat()).cwiseAbs().maxCoeff() <= 1e-12);
    // And the serial reference path agrees exactly.
    const Tensor3 serial = ref::probability_tensor(syn.params);
    CHECK((direct.flat() - serial.flat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("entries above one are rejected") {
    DcMsbmParams p;
    p.n = 2;
    p.L = 1;
    p.K = 2;
    p.labels = {0, 1};
    p.degrees = Vector(2);
    p.degrees << 2.0, 2.0;
    p.core = Tensor3(2, 2, 1, 0.5);
    CHECK_THROWS_AS(probability_tensor(p), std::invalid_argument);
}

TEST_CASE("sampling degenerate probabilities") {
    const Tensor3 zeros(6, 6, 2, 0.0);
    const MultiLayerNetwork z = sample_network(zeros, 1);
    CHECK(z.adjacency.flat().maxCoeff() == 0.0);
    const Tensor3 ones(6, 6, 2, 1.0);
    const MultiLayerNetwork o = sample_network(ones, 1);
    CHECK(o.adjacency.flat().minCoeff() == 1.0);
}

TEST_CASE("sampled density matches p = 0.5 within 4 standard errors") {
    const Index n = 50, L = 4;
    const Tensor3 half(n, n, L, 0.5);
    const MultiLayerNetwork net = sample_network(half, 20250);
    // Count independent draws only (i <= j).
    double sum = 0.0, count = 0.0;
    for (Index l = 0; l < L; ++l)
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i <= j; ++i) {
                sum += net.adjacency(i, j, l);
                count += 1.0;
            }
    const double se = std::sqrt(0.25 / count);
    CHECK(std::abs(sum / count - 0.5) < 4.0 * se);
    CHECK(is_semi_symmetric(net.adjacency));
}

TEST_CASE("sampling is unbiased at a fixed entry") {
    // Empirical frequency over R replications of one Bernoulli entry.
    const int R = 100000;
    const double p = 0.37;
    Tensor3 prob(3, 3, 1, p);
    int hits = 0;
    for (int r = 0; r < R; ++r) {
        const MultiLayerNetwork net = ref::sample_network(prob, static_cast<std::uint64_t>(r));
        hits += net.adjacency(0, 1, 0) == 1.0;
    }
    const double se = std::sqrt(p * (1 - p) / R);
    CHECK(std::abs(static_cast<double>(hits) / R - p) < 4.0 * se);
}

TEST_CASE("generator ranges follow the published recipe") {
    const Synthetic syn = generate_synthetic(60, 3, 5, 11);
    const DcMsbmParams& p = syn.params;
    for (Index l = 0; l < p.L; ++l)
        for (Index k1 = 0; k1 < p.K; ++k1)
            for (Index k2 = 0; k2 < p.K; ++k2) {
                const double b = p.core(k1, k2, l);
                if (k1 == k2) {
                    CHECK(b >= 0.5);
                    CHECK(b <= 1.0);
                } else {
                    CHECK(b >= 0.0);
                    CHECK(b <= 0.5);
                }
                CHECK(p.core(k1, k2, l) == p.core(k2, k1, l));
            }
    for (Index i = 0; i < p.n; ++i) {
        CHECK(p.degrees(i) >= 0.5);
        CHECK(p.degrees(i) <= 1.0);
    }
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("generation is deterministic per seed") {
    const Synthetic a = generate_synthetic(30, 2, 3, 5);
    const Synthetic b = generate_synthetic(30, 2, 3, 5);
    CHECK(a.params.labels == b.params.labels);
    CHECK((a.params.degrees - b.params.degrees).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.network.adjacency.flat() - b.network.adjacency.flat()).cwiseAbs().maxCoeff() == 0.0);
    const Synthetic c = generate_synthetic(30, 2, 3, 6);
    CHECK((a.network.adjacency.flat() - c.network.adjacency.flat()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("parallel and serial samplers agree") {
    const Synthetic syn = generate_synthetic(20, 2, 3, 123);
    const Tensor3 prob = probability_tensor(syn.params);
    const MultiLayerNetwork a = sample_network(prob, 9);
    const MultiLayerNetwork b = ref::sample_network(prob, 9);
    CHECK((a.adjacency.flat() - b.adjacency.flat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("within-community probability dominates on average") {
    const Synthetic syn = generate_synthetic(40, 3, 4, 19);
    const DcMsbmParams& p = syn.params;
    for (Index l = 0; l < p.L; ++l) {
        double diag = 0.0, off = 0.0;
        for (Index k1 = 0; k1 < p.K; ++k1)
            for (Index k2 = 0; k2 < p.K; ++k2)
                (k1 == k2 ? diag : off) += p.core(k1, k2, l);
        diag /= static_cast<double>(p.K);
        off /= static_cast<double>(p.K * (p.K - 1));
        CHECK(diag > off);
    }
}
