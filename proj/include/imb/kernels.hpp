#pragma once

#include "imb/common.hpp"

#include <span>
#include <vector>

// Data-parallel inner loops. Every kernel has an OpenMP version and a plain serial version with the same
// per-element arithmetic, so the two agree bit-for-bit regardless of thread count.
namespace imb::kernels {

/// Per-component terms of a Gaussian mixture ready for density evaluation.
struct GaussianTerms {
    Matrix means;                 ///< C x d
    std::vector<Matrix> inv_chol;  ///< inverse lower Cholesky factor of each covariance
    Vector log_norm;              ///< log(weight) - (d log(2 pi) + log det) / 2
};

/**
 * E-step: writes posterior responsibilities (n x C) into `resp` and returns log sum_c weight_c N(x_i | c) per row.
 * Evaluated in log space. Unnormalised terms below 1e-200 of the row maximum are stored as exact zeros.
 */
Vector gmm_e_step(const Matrix &x, const GaussianTerms &terms, Matrix &resp);

/// K(x_i, x_j) = exp(-gamma ||x_i - x_j||^2) for all j, into `out` (length n).
void rbf_row(const Matrix &x, Eigen::Index i, double gamma, std::span<double> out);

/// sum_s coef_s K(sv_s, x) + bias for every row of `x`.
Vector rbf_decision(const Matrix &support, const Vector &coef, double bias, double gamma, const Matrix &x);

namespace serial {
Vector gmm_e_step(const Matrix &x, const GaussianTerms &terms, Matrix &resp);
void rbf_row(const Matrix &x, Eigen::Index i, double gamma, std::span<double> out);
Vector rbf_decision(const Matrix &support, const Vector &coef, double bias, double gamma, const Matrix &x);
}  // namespace serial

}  // namespace imb::kernels
