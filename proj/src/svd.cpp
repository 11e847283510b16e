// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/svd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlpriv {

void fix_signs(Matrix& u, Matrix* v) {
    for (Index c = 0; c < u.cols(); ++c) {
        Index imax = 0;
        double best = -1.0;
        for (Index r = 0; r < u.rows(); ++r) {
            const double a = std::abs(u(r, c));
            if (a > best) {
                best = a;
                imax = r;
            }
        }
        if (u(imax, c) < 0.0) {
            u.col(c) = -u.col(c);
            if (v) v->col(c) = -v->col(c);
        }
    }
}

Svd truncated_svd(const Matrix& m, Index rank) {
    if (!m.allFinite()) throw std::invalid_argument("truncated_svd: input has non-finite entries");
    if (rank < 1 || rank > std::min(m.rows(), m.cols()))
        throw std::invalid_argument("truncated_svd: rank out of range");

    Svd out;
    if (std::min(m.rows(), m.cols()) <= 16) {
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = svd.matrixU().leftCols(rank);
        out.s = svd.singularValues().head(rank);
        out.v = svd.matrixV().leftCols(rank);
    } else {
        Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = svd.matrixU().leftCols(rank);
        out.s = svd.singularValues().head(rank);
        out.v = svd.matrixV().leftCols(rank);
    }
    fix_signs(out.u, &out.v);
    return out;
}

Matrix leading_left_vectors(const Matrix& m, Index rank) {
    if (rank < 1 || rank > m.rows())
        throw std::invalid_argument("leading_left_vectors: rank out of range");
    if (m.cols() < 2 * m.rows() || m.rows() <= 32) {
        if (rank > std::min(m.rows(), m.cols())) {
            // Requested more directions than the matrix has columns; pad with
            // an orthonormal completion from the full decomposition.
            Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU);
            Matrix u = svd.matrixU().leftCols(rank);
            fix_signs(u, nullptr);
            return u;
        }
        return truncated_svd(m, rank).u;
    }
    Matrix gram(m.rows(), m.rows());
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("leading_left_vectors: eigensolver failed");
    // Eigenvalues come back ascending; take the trailing columns.
    Matrix u = es.eigenvectors().rightCols(rank).rowwise().reverse();
    fix_signs(u, nullptr);
    return u;
}

Vector singular_values_gram(const Matrix& m) {
    const bool rows_small = m.rows() <= m.cols();
    Matrix gram;
    if (rows_small) {
        gram.setZero(m.rows(), m.rows());
        gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
    } else {
        gram.setZero(m.cols(), m.cols());
        gram.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    Vector ev = es.eigenvalues().reverse();
    for (Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(0.0, ev(i)));
    return ev;
}

}  // namespace mlpriv
