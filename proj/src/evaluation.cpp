// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/evaluation.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mlpriv {

std::vector<Index> max_assignment(const Matrix& weights) {
    const Index n = weights.rows();
    if (weights.cols() != n) throw std::invalid_argument("max_assignment: matrix must be square");
    const double big = n == 0 ? 0.0 : weights.maxCoeff();
    const double inf = std::numeric_limits<double>::infinity();

    // Hungarian algorithm with potentials on the min-cost matrix big - w.
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<Index> p(static_cast<std::size_t>(n + 1), 0);
    std::vector<Index> way(static_cast<std::size_t>(n + 1), 0);
    for (Index i = 1; i <= n; ++i) {
        p[0] = i;
        Index j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const Index i0 = p[static_cast<std::size_t>(j0)];
            Index j1 = 0;
            double delta = inf;
            for (Index j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = (big - weights(i0 - 1, j - 1)) -
                                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const Index j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<Index> row_to_col(static_cast<std::size_t>(n), 0);
    for (Index j = 1; j <= n; ++j)
        row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

double hamming_error(const std::vector<int>& c_hat, const std::vector<int>& c_star, Index k) {
    if (c_hat.size() != c_star.size())
        throw std::invalid_argument("hamming_error: label vectors differ in length");
    if (c_hat.empty()) throw std::invalid_argument("hamming_error: empty label vectors");
    const Index n = static_cast<Index>(c_hat.size());

    Matrix confusion = Matrix::Zero(k, k);
    for (Index i = 0; i < n; ++i) {
        const int a = c_hat[static_cast<std::size_t>(i)];
        const int b = c_star[static_cast<std::size_t>(i)];
        if (a < 0 || a >= k || b < 0 || b >= k)
            throw std::invalid_argument("hamming_error: label out of range");
        confusion(a, b) += 1.0;
    }

    const std::vector<Index> match = max_assignment(confusion);
    Index agreements = 0;
    for (Index a = 0; a < k; ++a)
        agreements += static_cast<Index>(confusion(a, match[static_cast<std::size_t>(a)]));
    return static_cast<double>(n - agreements) / static_cast<double>(n);
}

DiagnosticsReport diagnostics(const DcMsbmParams& params, const PrivacyProfile& profile,
                              const DiagnosticsOptions& opts) {
    params.validate();
    profile.validate();
    if (profile.n() != params.n)
        throw std::invalid_argument("diagnostics: profile length must equal n");

    const Index n = params.n, L = params.L, K = params.K;
    DiagnosticsReport r{};

    r.sn = opts.sn;
    if (std::isnan(r.sn)) r.sn = params.sparsity * max_abs(params.core);

    Vector fd2(n);
    for (Index i = 0; i < n; ++i) {
        const double fd = profile.f(i) * params.degrees(i);
        fd2(i) = fd * fd;
    }

    Vector nk = Vector::Zero(K);
    r.gamma = Vector::Zero(K);
    for (Index i = 0; i < n; ++i) {
        const int c = params.labels[static_cast<std::size_t>(i)];
        nk(c) += 1.0;
        r.gamma(c) += fd2(i);
    }

    r.psi_bar = fd2.sum() / static_cast<double>(n);
    r.phi_n = 1.0 - profile.f.minCoeff() + 4.0 * r.sn;

    r.v = Vector::Zero(K);
    r.v_infinite = false;
    r.row_bound_max = 0.0;
    for (Index i = 0; i < n; ++i) {
        const int c = params.labels[static_cast<std::size_t>(i)];
        if (fd2(i) == 0.0) {
            r.v_infinite = true;
            r.v(c) = std::numeric_limits<double>::infinity();
        } else if (!std::isinf(r.v(c))) {
            r.v(c) += r.gamma(c) / fd2(i) / (nk(c) * nk(c));
            r.row_bound_max = std::max(r.row_bound_max, fd2(i) * nk(c) / r.gamma(c));
        }
    }

    const double vsum = r.v.sum();
    r.bound = std::sqrt(vsum) * std::sqrt(r.phi_n * std::log(static_cast<double>(n))) /
              (std::sqrt(static_cast<double>(n * L)) * r.sn * r.psi_bar);

    // Smallest nonzero singular value of the mode-3 matricized (scaled) core.
    Matrix m3 = matricize(params.core, 3) * params.sparsity;
    Eigen::JacobiSVD<Matrix> svd(m3);
    const Vector sv = svd.singularValues();
    r.sigma_min_core = 0.0;
    for (Index i = sv.size() - 1; i >= 0; --i)
        if (sv(i) > 1e-12 * std::max(sv(0), 1e-300)) {
            r.sigma_min_core = sv(i);
            break;
        }

    r.size_ratio = nk.maxCoeff() / nk.minCoeff();
    r.a1_balanced_sizes = r.size_ratio <= opts.c1;

    r.gamma_ratio = r.gamma.maxCoeff() / r.gamma.minCoeff();
    r.a2_balanced_gamma = r.gamma_ratio <= opts.c2 && r.row_bound_max <= opts.c2;

    r.sparsity_rhs = std::sqrt(r.phi_n * std::log(static_cast<double>(n)) /
                               static_cast<double>(n * L)) /
                     r.psi_bar;
    r.a3_sparsity = r.sn >= opts.c3 * r.sparsity_rhs;

    r.signal_rhs = std::sqrt(static_cast<double>(L)) * r.sn;
    r.a4_signal = r.sigma_min_core >= opts.c4 * r.signal_rhs;

    return r;
}

std::string format_diagnostics(const DiagnosticsReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << "psi_bar " << r.psi_bar << "\n";
    os << "phi_n " << r.phi_n << "\n";
    os << "s_n " << r.sn << "\n";
    os << "sigma_min_core " << r.sigma_min_core << "\n";
    os << "bound " << r.bound << "\n";
    for (Index k = 0; k < r.gamma.size(); ++k) os << "gamma_" << (k + 1) << " " << r.gamma(k) << "\n";
    for (Index k = 0; k < r.v.size(); ++k) os << "v_" << (k + 1) << " " << r.v(k) << "\n";
    os << "size_ratio " << r.size_ratio << "\n";
    os << "gamma_ratio " << r.gamma_ratio << "\n";
    os << "row_bound_max " << r.row_bound_max << "\n";
    os << "sparsity_rhs " << r.sparsity_rhs << "\n";
    os << "signal_rhs " << r.signal_rhs << "\n";
    os << "assumption1 " << (r.a1_balanced_sizes ? "ok" : "violated") << "\n";
    os << "assumption2 " << (r.a2_balanced_gamma ? "ok" : "violated") << "\n";
    os << "assumption3 " << (r.a3_sparsity ? "ok" : "violated") << "\n";
    os << "assumption4 " << (r.a4_signal ? "ok" : "violated") << "\n";
    return os.str();
}

RegimeReport corollary_regime_check(const PrivacyProfile& profile, const DcMsbmParams& params,
                                    Scenario scenario) {
    profile.validate();
    const Index n = params.n, L = params.L;
    double sn = params.sparsity * max_abs(params.core);
    const double logn = std::log(static_cast<double>(n));

    RegimeReport rep{};
    rep.scenario = scenario;
    if (scenario == Scenario::kUniform) {
        const double fmin = profile.f.minCoeff();
        rep.lhs = fmin * fmin * fmin * fmin;
        rep.rhs = logn / (static_cast<double>(n * L) * sn * sn);
        rep.holds = rep.lhs > rep.rhs;
        return rep;
    }

    // Polarized: split at the midpoint of the preference range; a constant
    // profile has no strict-privacy group.
    const double fmin = profile.f.minCoeff(), fmax = profile.f.maxCoeff();
    std::vector<Index> small;
    if (fmax - fmin > 1e-12) {
        const double mid = 0.5 * (fmin + fmax);
        for (Index i = 0; i < profile.n(); ++i)
            if (profile.f(i) <= mid) small.push_back(i);
    }
    rep.beta_n = static_cast<double>(small.size()) / static_cast<double>(n);
    if (!small.empty()) {
        double sum = 0.0;
        for (Index i : small) sum += profile.f(i);
        rep.alpha_n = sum / static_cast<double>(small.size());
    }
    rep.lhs = small.empty() ? 0.0
                            : rep.beta_n / (rep.alpha_n * rep.alpha_n * (1.0 - rep.beta_n));
    rep.rhs = static_cast<double>(n * L) * sn * sn / logn;
    rep.holds = rep.lhs < rep.rhs;
    return rep;
}

}  // namespace mlpriv
