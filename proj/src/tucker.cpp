// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/tucker.hpp"

#include "mlpriv/svd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlpriv {

namespace {

Tensor3 project(const Tensor3& t, const Matrix* u, const Matrix* v, const Matrix* w) {
    Tensor3 out = t;
    if (u) out = mode_product(out, u->transpose(), 1);
    if (v) out = mode_product(out, v->transpose(), 2);
    if (w) out = mode_product(out, w->transpose(), 3);
    return out;
}

// Residual of the orthogonal Tucker approximation.  The cheap identity
// ||t||^2 - ||core||^2 cancels catastrophically once the residual nears the
// sqrt(eps)*||t|| floor, so small residuals are recomputed from the actual
// reconstruction difference.
double residual(const Tensor3& ts, double tnorm2, const Tensor3& core, const Matrix& u,
                const Matrix& v, const Matrix& w) {
    const double c2 = core.flat().squaredNorm();
    const double resid2 = tnorm2 - c2;
    if (resid2 > 1e-10 * tnorm2) return std::sqrt(resid2);
    Tensor3 rec = mode_product(mode_product(mode_product(core, u, 1), v, 2), w, 3);
    return (ts.flat() - rec.flat()).norm();
}

}  // namespace

TuckerFactors tucker(const Tensor3& t, std::array<Index, 3> ranks, const TuckerOptions& opts) {
    const Index i1 = t.dim(1), i2 = t.dim(2), i3 = t.dim(3);
    if (ranks[0] < 1 || ranks[0] > i1 || ranks[1] < 1 || ranks[1] > i2 || ranks[2] < 1 ||
        ranks[2] > i3)
        throw std::invalid_argument("tucker: ranks out of range");
    if (opts.tol <= 0) throw std::invalid_argument("tucker: tol must be positive");
    if (opts.shared_mode12 && (i1 != i2 || ranks[0] != ranks[1]))
        throw std::invalid_argument("tucker: shared_mode12 needs equal mode-1/2 dims and ranks");

    const Tensor3 ts = opts.shared_mode12 ? symmetrize12(t) : t;
    const double tnorm = frobenius_norm(ts);
    const double tnorm2 = tnorm * tnorm;

    TuckerFactors best;
    best.shared_mode12 = opts.shared_mode12;

    // HOSVD initialization.  The mode-3 rank is capped at the numerical rank
    // of the mode-3 matricization so degenerate (e.g. noiseless) inputs do
    // not drag null-space directions into the core.
    Matrix m3 = matricize(ts, 3);
    Vector sv3 = singular_values_gram(m3);
    Index r3 = ranks[2];
    Index num_rank3 = 0;
    // Gram-based values are only accurate to ~sqrt(eps) relative, hence the
    // loose truncation threshold.
    for (Index k = 0; k < sv3.size(); ++k)
        if (sv3(k) > 1e-7 * std::max(sv3(0), 1e-300)) ++num_rank3;
    if (num_rank3 > 0 && num_rank3 < r3) {
        r3 = num_rank3;
        best.mode3_rank_truncated = true;
    }

    Matrix u = leading_left_vectors(matricize(ts, 1), ranks[0]);
    Matrix v = opts.shared_mode12 ? u : leading_left_vectors(matricize(ts, 2), ranks[1]);
    Matrix w = leading_left_vectors(m3, r3);

    Tensor3 core = project(ts, &u, &v, &w);
    double resid = residual(ts, tnorm2, core, u, v, w);

    best.u = u;
    best.v = v;
    best.w = w;
    best.core = core;
    best.residual = resid;
    best.residual_history.push_back(resid);

    // HOOI sweeps; a sweep that fails to improve the residual is discarded
    // and iteration stops on the best iterate so far.
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        if (opts.shared_mode12) {
            Tensor3 g = project(ts, nullptr, &u, &w);
            u = leading_left_vectors(matricize(g, 1), ranks[0]);
            v = u;
        } else {
            Tensor3 g1 = project(ts, nullptr, &v, &w);
            u = leading_left_vectors(matricize(g1, 1), ranks[0]);
            Tensor3 g2 = project(ts, &u, nullptr, &w);
            v = leading_left_vectors(matricize(g2, 2), ranks[1]);
        }
        Tensor3 g3 = project(ts, &u, &v, nullptr);
        w = leading_left_vectors(matricize(g3, 3), r3);

        core = mode_product(g3, w.transpose(), 3);
        resid = residual(ts, tnorm2, core, u, v, w);

        best.iterations = iter;
        const double prev = best.residual;
        if (resid > prev) {
            // Shared-factor sweeps are not guaranteed monotone; keep the
            // previous iterate.  A rise within numerical noise of the
            // residual floor still counts as converged.
            best.converged = resid <= prev + 1e-12 * std::max(1.0, tnorm);
            break;
        }
        best.u = u;
        best.v = v;
        best.w = w;
        best.core = core;
        best.residual = resid;
        best.residual_history.push_back(resid);
        if (prev - resid < opts.tol * std::max(tnorm, 1e-300)) {
            best.converged = true;
            break;
        }
    }
    return best;
}

Tensor3 tucker_reconstruct(const TuckerFactors& f) {
    Tensor3 out = mode_product(f.core, f.u, 1);
    out = mode_product(out, f.v, 2);
    return mode_product(out, f.w, 3);
}

}  // namespace mlpriv
