#pragma once

#include "imb/common.hpp"
#include "imb/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace imb {

struct EmConfig {
    int max_iters{ 200 };
    double tol{ 1e-6 };        ///< stop once the relative log-likelihood gain drops below this
    double reg_floor{ 1e-6 };  ///< added to every covariance diagonal
    int n_init{ 3 };
    std::uint64_t seed{ 0 };

    void validate() const;
};

/// Gaussian mixture with full covariances. Immutable once built; queries are thread-safe.
class GmmModel {
  public:
    GmmModel() = default;
    /// Throws imb::invalid_argument if a covariance is not positive definite or shapes disagree.
    GmmModel(Vector weights, Matrix means, std::vector<Matrix> covariances);

    [[nodiscard]] std::size_t components() const noexcept { return static_cast<std::size_t>(weights_.size()); }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(means_.cols()); }
    [[nodiscard]] const Vector &weights() const noexcept { return weights_; }
    [[nodiscard]] const Matrix &means() const noexcept { return means_; }
    [[nodiscard]] const std::vector<Matrix> &covariances() const noexcept { return covariances_; }

    [[nodiscard]] bool converged() const noexcept { return converged_; }
    [[nodiscard]] double final_log_likelihood() const noexcept { return final_log_likelihood_; }
    /// Total log-likelihood after each E-step of the winning restart (first entry: initial parameters).
    [[nodiscard]] const std::vector<double> &log_likelihood_trace() const noexcept { return trace_; }
    /// Trace positions that directly follow an empty-component re-seed; EM monotonicity does not span these.
    [[nodiscard]] const std::vector<std::size_t> &reseed_steps() const noexcept { return reseed_steps_; }

    /// Posterior probability of each component for point `x` (sums to one).
    [[nodiscard]] Vector point_responsibilities(const Eigen::Ref<const RowVector> &x) const;
    /// Row i holds the responsibilities of row i of `x`.
    [[nodiscard]] Matrix responsibilities(const Matrix &x) const;
    [[nodiscard]] double log_likelihood(const Matrix &x) const;
    /// argmax responsibility per row, ties to the lower component.
    [[nodiscard]] std::vector<std::size_t> hard_assign(const Matrix &x) const;

    [[nodiscard]] const kernels::GaussianTerms &terms() const noexcept { return terms_; }

  private:
    friend GmmModel fit_gmm(const Matrix &, std::size_t, const EmConfig &);

    void check_query(const Matrix &x) const;

    Vector weights_;
    Matrix means_;
    std::vector<Matrix> covariances_;
    kernels::GaussianTerms terms_;
    bool converged_{ false };
    double final_log_likelihood_{ 0.0 };
    std::vector<double> trace_;
    std::vector<std::size_t> reseed_steps_;
};

/**
 * Fits a C-component mixture by EM, keeping the best of `cfg.n_init` restarts. Each restart seeds the means
 * k-means++ style, starts every covariance at the data covariance plus the regulariser and uses uniform weights.
 * A component whose total responsibility falls below 1e-10 is re-seeded at the worst-explained point.
 */
[[nodiscard]] GmmModel fit_gmm(const Matrix &points, std::size_t components, const EmConfig &cfg = {});

}  // namespace imb
