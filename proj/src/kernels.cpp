#include "imb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace imb::kernels {

namespace {

constexpr Eigen::Index e_block = 128;
constexpr double resp_floor = 1e-200;

using ColMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

// Rows [begin, begin + count) of the E-step. Blocks are fixed, so every schedule performs identical arithmetic.
void e_step_block(const Matrix &x, const GaussianTerms &terms, Eigen::Index begin, Eigen::Index count, Matrix &resp,
                  Vector &lse) {
    const Eigen::Index c_count = terms.means.rows();
    const Eigen::Index d = x.cols();
    // the block transposed to one contiguous column per feature, so the distance loops run across rows
    const ColMatrix xb = x.middleRows(begin, count);
    ColMatrix logp(count, c_count);
    ColMatrix diff(count, d);
    Eigen::ArrayXd acc(count);
    Eigen::ArrayXd maha(count);
    for (Eigen::Index c = 0; c < c_count; ++c) {
        const Matrix &inv = terms.inv_chol[static_cast<std::size_t>(c)];
        for (Eigen::Index a = 0; a < d; ++a) {
            diff.col(a).array() = xb.col(a).array() - terms.means(c, a);
        }
        // squared Mahalanobis distance ||L^{-1}(x - mu)||^2 with L^{-1} lower triangular
        maha.setZero();
        for (Eigen::Index a = 0; a < d; ++a) {
            acc = inv(a, 0) * diff.col(0).array();
            for (Eigen::Index b = 1; b <= a; ++b) {
                acc += inv(a, b) * diff.col(b).array();
            }
            maha += acc.square();
        }
        logp.col(c).array() = terms.log_norm(c) - 0.5 * maha;
    }
    const Vector row_max = logp.rowwise().maxCoeff();
    logp.colwise() -= row_max;
    // exp(-500) is already below the floor; clamping first keeps exp itself away from subnormal results
    logp.array() = logp.array().max(-500.0).exp();
    // terms this small cannot move any sum; dropping them keeps subnormals out of the arithmetic
    logp = (logp.array() < resp_floor).select(0.0, logp);
    const Vector sum = logp.rowwise().sum();
    for (Eigen::Index i = 0; i < count; ++i) {
        auto out = resp.row(begin + i);
        if (!std::isfinite(row_max(i))) {
            // every component has zero weight or the density underflowed; spread evenly
            out.setConstant(1.0 / static_cast<double>(c_count));
            lse(begin + i) = row_max(i);
            continue;
        }
        out = logp.row(i) / sum(i);
        lse(begin + i) = row_max(i) + std::log(sum(i));
    }
}

double rbf(const double *a, const double *b, Eigen::Index d, double gamma) {
    double dist2 = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        dist2 += t * t;
    }
    return std::exp(-gamma * dist2);
}

double decision_row(const Matrix &support, const Vector &coef, double bias, double gamma, const double *xi) {
    const Eigen::Index d = support.cols();
    double acc = 0.0;
    for (Eigen::Index s = 0; s < support.rows(); ++s) {
        acc += coef(s) * rbf(support.data() + s * d, xi, d, gamma);
    }
    return acc + bias;
}

}  // namespace

Vector gmm_e_step(const Matrix &x, const GaussianTerms &terms, Matrix &resp) {
    const Eigen::Index n = x.rows();
    resp.resize(n, terms.means.rows());
    Vector lse(n);
    const Eigen::Index blocks = (n + e_block - 1) / e_block;
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < blocks; ++b) {
        e_step_block(x, terms, b * e_block, std::min(e_block, n - b * e_block), resp, lse);
    }
    return lse;
}

void rbf_row(const Matrix &x, Eigen::Index i, double gamma, std::span<double> out) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const double *xi = x.data() + i * d;
#pragma omp parallel for schedule(static) if (n > 2048)
    for (Eigen::Index j = 0; j < n; ++j) {
        out[static_cast<std::size_t>(j)] = rbf(xi, x.data() + j * d, d, gamma);
    }
}

Vector rbf_decision(const Matrix &support, const Vector &coef, double bias, double gamma, const Matrix &x) {
    Vector out(x.rows());
    const Eigen::Index n = x.rows();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i) = decision_row(support, coef, bias, gamma, x.data() + i * x.cols());
    }
    return out;
}

namespace serial {

Vector gmm_e_step(const Matrix &x, const GaussianTerms &terms, Matrix &resp) {
    const Eigen::Index n = x.rows();
    resp.resize(n, terms.means.rows());
    Vector lse(n);
    for (Eigen::Index begin = 0; begin < n; begin += e_block) {
        e_step_block(x, terms, begin, std::min(e_block, n - begin), resp, lse);
    }
    return lse;
}

void rbf_row(const Matrix &x, Eigen::Index i, double gamma, std::span<double> out) {
    const Eigen::Index d = x.cols();
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
        out[static_cast<std::size_t>(j)] = rbf(x.data() + i * d, x.data() + j * d, d, gamma);
    }
}

Vector rbf_decision(const Matrix &support, const Vector &coef, double bias, double gamma, const Matrix &x) {
    Vector out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        out(i) = decision_row(support, coef, bias, gamma, x.data() + i * x.cols());
    }
    return out;
}

}  // namespace serial

}  // namespace imb::kernels
