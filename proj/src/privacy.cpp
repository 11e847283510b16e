// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/privacy.hpp"

#include "mlpriv/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlpriv {

using rng::Purpose;
using rng::Substream;

void PrivacyProfile::validate() const {
    if (f.size() < 1) throw std::invalid_argument("PrivacyProfile: empty");
    for (Index i = 0; i < f.size(); ++i)
        if (!(f(i) >= 0.0 && f(i) <= 1.0))
            throw std::invalid_argument("PrivacyProfile: preferences must lie in [0,1]");
}

PrivacyProfile PrivacyProfile::constant(Index n, double value) {
    PrivacyProfile p;
    p.f = Vector::Constant(n, value);
    p.validate();
    return p;
}

FlipMatrix flip_matrix(const PrivacyProfile& profile) {
    profile.validate();
    const Index n = profile.n();
    FlipMatrix out;
    out.theta.resize(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) out.theta(i, j) = 0.5 * (profile.f(i) * profile.f(j) + 1.0);
    return out;
}

FlipMatrix constant_flip_matrix(Index n, double theta) {
    if (!(theta >= 0.5 && theta <= 1.0))
        throw std::invalid_argument("constant_flip_matrix: theta must lie in [1/2, 1]");
    FlipMatrix out;
    out.theta = Matrix::Constant(n, n, theta);
    return out;
}

double uniform_theta(double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("uniform_theta: eps must be nonnegative");
    // e^eps / (1 + e^eps), evaluated without overflow.
    return 1.0 / (1.0 + std::exp(-eps));
}

double preference_from_epsilon(double eps) {
    if (!(eps >= 0.0))
        throw std::invalid_argument("preference_from_epsilon: eps must be nonnegative");
    // (e^eps - 1)/(e^eps + 1) = tanh(eps / 2).
    return std::sqrt(std::tanh(0.5 * eps));
}

MultiLayerNetwork flip_network(const MultiLayerNetwork& net, const FlipMatrix& theta,
                               std::uint64_t seed) {
    const Index n = net.n, L = net.L;
    if (net.adjacency.dim(1) != n || net.adjacency.dim(2) != n || net.adjacency.dim(3) != L)
        throw std::invalid_argument("flip_network: inconsistent network dims");
    if (theta.theta.rows() != n || theta.theta.cols() != n)
        throw std::invalid_argument("flip_network: theta must be n x n");

    MultiLayerNetwork out;
    out.n = n;
    out.L = L;
    out.adjacency = Tensor3(n, n, L);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            Substream s(seed, Purpose::kFlip,
                        rng::pack2(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
            const double keep = theta.theta(i, j);
            for (Index l = 0; l < L; ++l) {
                const double a = net.adjacency(i, j, l);
                const double b = s.bernoulli(keep) ? a : 1.0 - a;
                out.adjacency(i, j, l) = b;
                out.adjacency(j, i, l) = b;
            }
        }
    }
    return out;
}

BudgetMatrix privacy_budget(const PrivacyProfile& profile) {
    profile.validate();
    const Index n = profile.n();
    BudgetMatrix out;
    out.eps.resize(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
            const double ff = profile.f(i) * profile.f(j);
            out.eps(i, j) = ff >= 1.0 ? std::numeric_limits<double>::infinity()
                                      : std::log((1.0 + ff) / (1.0 - ff));
        }
    return out;
}

double preference_from_budgets(double eps_ii2, double eps_ij, double eps_i2j) {
    for (double e : {eps_ii2, eps_ij, eps_i2j})
        if (!(e >= 0.0) || !std::isfinite(e))
            throw std::invalid_argument("preference_from_budgets: budgets must be finite and >= 0");
    const auto term = [](double e) { return 1.0 - 2.0 / (1.0 + std::exp(e)); };
    const double denom = term(eps_i2j);
    if (denom == 0.0)
        throw std::domain_error("preference_from_budgets: undefined preference (eps_{i',j} = 0)");
    return std::sqrt(term(eps_ii2) * term(eps_ij) / denom);
}

DebiasedTensor debias(const MultiLayerNetwork& flipped, const PrivacyProfile& profile) {
    profile.validate();
    const Index n = flipped.n, L = flipped.L;
    if (profile.n() != n) throw std::invalid_argument("debias: profile length must equal n");

    DebiasedTensor out;
    out.profile = profile;
    out.values = Tensor3(n, n, L);
#pragma omp parallel for schedule(static)
    for (Index l = 0; l < L; ++l)
        for (Index j = 0; j < n; ++j) {
            const double fj = profile.f(j);
            for (Index i = 0; i < n; ++i)
                out.values(i, j, l) =
                    flipped.adjacency(i, j, l) + 0.5 * (profile.f(i) * fj - 1.0);
        }
    return out;
}

Tensor3 rescale_debias(const DebiasedTensor& t) {
    const Index n = t.values.dim(1), L = t.values.dim(3);
    for (Index i = 0; i < t.profile.n(); ++i)
        if (t.profile.f(i) <= 0.0)
            throw std::domain_error("rescale_debias: not rescalable, some f_i = 0");
    Tensor3 out(n, n, L);
#pragma omp parallel for schedule(static)
    for (Index l = 0; l < L; ++l)
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                out(i, j, l) = t.values(i, j, l) / (t.profile.f(i) * t.profile.f(j));
    return out;
}

}  // namespace mlpriv
