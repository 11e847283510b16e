// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/reference.hpp"

#include "mlpriv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mlpriv::ref {

using rng::Purpose;
using rng::Substream;

Matrix matricize(const Tensor3& t, int mode) {
    if (mode < 1 || mode > 3) throw std::invalid_argument("ref::matricize: bad mode");
    const std::array<Index, 3> dims = t.dims();
    Index cols = 1;
    for (int d = 1; d <= 3; ++d)
        if (d != mode) cols *= dims[static_cast<std::size_t>(d - 1)];
    Matrix m(dims[static_cast<std::size_t>(mode - 1)], cols);
    for (Index i3 = 1; i3 <= dims[2]; ++i3)
        for (Index i2 = 1; i2 <= dims[1]; ++i2)
            for (Index i1 = 1; i1 <= dims[0]; ++i1) {
                const std::array<Index, 3> idx = {i1, i2, i3};
                Index col = 1;
                for (int l = 1; l <= 3; ++l) {
                    if (l == mode) continue;
                    Index stride = 1;
                    for (int d = 1; d < l; ++d)
                        if (d != mode) stride *= dims[static_cast<std::size_t>(d - 1)];
                    col += (idx[static_cast<std::size_t>(l - 1)] - 1) * stride;
                }
                m(idx[static_cast<std::size_t>(mode - 1)] - 1, col - 1) = t(i1 - 1, i2 - 1, i3 - 1);
            }
    return m;
}

Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode) {
    if (mode < 1 || mode > 3) throw std::invalid_argument("ref::mode_product: bad mode");
    if (m.cols() != t.dim(mode)) throw std::invalid_argument("ref::mode_product: dim mismatch");
    std::array<Index, 3> dims = t.dims();
    dims[static_cast<std::size_t>(mode - 1)] = m.rows();
    Tensor3 out(dims[0], dims[1], dims[2]);
    for (Index k = 0; k < dims[2]; ++k)
        for (Index j = 0; j < dims[1]; ++j)
            for (Index i = 0; i < dims[0]; ++i) {
                double acc = 0.0;
                switch (mode) {
                    case 1:
                        for (Index q = 0; q < t.dim(1); ++q) acc += t(q, j, k) * m(i, q);
                        break;
                    case 2:
                        for (Index q = 0; q < t.dim(2); ++q) acc += t(i, q, k) * m(j, q);
                        break;
                    case 3:
                        for (Index q = 0; q < t.dim(3); ++q) acc += t(i, j, q) * m(k, q);
                        break;
                }
                out(i, j, k) = acc;
            }
    return out;
}

Tensor3 probability_tensor(const DcMsbmParams& params) {
    params.validate();
    Tensor3 p(params.n, params.n, params.L);
    for (Index l = 0; l < params.L; ++l)
        for (Index j = 0; j < params.n; ++j)
            for (Index i = 0; i < params.n; ++i)
                p(i, j, l) = params.degrees(i) * params.degrees(j) * params.sparsity *
                             params.core(params.labels[static_cast<std::size_t>(i)],
                                         params.labels[static_cast<std::size_t>(j)], l);
    return p;
}

MultiLayerNetwork sample_network(const Tensor3& prob, std::uint64_t seed) {
    const Index n = prob.dim(1), L = prob.dim(3);
    MultiLayerNetwork net;
    net.n = n;
    net.L = L;
    net.adjacency = Tensor3(n, n, L);
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            Substream s(seed, Purpose::kSample,
                        rng::pack2(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
            for (Index l = 0; l < L; ++l) {
                const double a = s.bernoulli(prob(i, j, l)) ? 1.0 : 0.0;
                net.adjacency(i, j, l) = a;
                net.adjacency(j, i, l) = a;
            }
        }
    return net;
}

MultiLayerNetwork flip_network(const MultiLayerNetwork& net, const FlipMatrix& theta,
                               std::uint64_t seed) {
    const Index n = net.n, L = net.L;
    MultiLayerNetwork out;
    out.n = n;
    out.L = L;
    out.adjacency = Tensor3(n, n, L);
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            Substream s(seed, Purpose::kFlip,
                        rng::pack2(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
            for (Index l = 0; l < L; ++l) {
                const double a = net.adjacency(i, j, l);
                const double b = s.bernoulli(theta.theta(i, j)) ? a : 1.0 - a;
                out.adjacency(i, j, l) = b;
                out.adjacency(j, i, l) = b;
            }
        }
    return out;
}

DebiasedTensor debias(const MultiLayerNetwork& flipped, const PrivacyProfile& profile) {
    DebiasedTensor out;
    out.profile = profile;
    out.values = Tensor3(flipped.n, flipped.n, flipped.L);
    for (Index l = 0; l < flipped.L; ++l)
        for (Index j = 0; j < flipped.n; ++j)
            for (Index i = 0; i < flipped.n; ++i)
                out.values(i, j, l) = flipped.adjacency(i, j, l) +
                                      0.5 * (profile.f(i) * profile.f(j) - 1.0);
    return out;
}

FullSvd jacobi_svd(const Matrix& m) {
    // One-sided Jacobi on the taller orientation: orthogonalize columns of a
    // working copy W = m (or m^T), so that W = U diag(s) V^T emerges from the
    // accumulated rotations.
    const bool transposed = m.rows() < m.cols();
    Matrix w = transposed ? m.transpose() : m;
    const Index cols = w.cols();
    Matrix v = Matrix::Identity(cols, cols);

    const double eps = 1e-14;
    for (int sweep = 0; sweep < 120; ++sweep) {
        bool rotated = false;
        for (Index p = 0; p < cols - 1; ++p)
            for (Index q = p + 1; q < cols; ++q) {
                const double app = w.col(p).squaredNorm();
                const double aqq = w.col(q).squaredNorm();
                const double apq = w.col(p).dot(w.col(q));
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double tau = (zeta >= 0.0 ? 1.0 : -1.0) /
                                   (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + tau * tau);
                const double s = c * tau;
                for (Index r = 0; r < w.rows(); ++r) {
                    const double wp = w(r, p), wq = w(r, q);
                    w(r, p) = c * wp - s * wq;
                    w(r, q) = s * wp + c * wq;
                }
                for (Index r = 0; r < cols; ++r) {
                    const double vp = v(r, p), vq = v(r, q);
                    v(r, p) = c * vp - s * vq;
                    v(r, q) = s * vp + c * vq;
                }
            }
        if (!rotated) break;
    }

    Vector s(cols);
    Matrix u = w;
    for (Index c = 0; c < cols; ++c) {
        s(c) = w.col(c).norm();
        if (s(c) > 0.0)
            u.col(c) /= s(c);
        else
            u.col(c).setZero();
    }

    // Sort nonincreasing.
    std::vector<Index> order(static_cast<std::size_t>(cols));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return s(a) > s(b); });
    Matrix us(u.rows(), cols), vs(v.rows(), cols);
    Vector ss(cols);
    for (Index c = 0; c < cols; ++c) {
        us.col(c) = u.col(order[static_cast<std::size_t>(c)]);
        vs.col(c) = v.col(order[static_cast<std::size_t>(c)]);
        ss(c) = s(order[static_cast<std::size_t>(c)]);
    }

    FullSvd out;
    if (transposed) {
        out.u = vs;
        out.v = us;
    } else {
        out.u = us;
        out.v = vs;
    }
    out.s = ss;
    return out;
}

}  // namespace mlpriv::ref
