#pragma once

#include "imb/common.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace imb {

struct SvmParams {
    double c_reg{ 1.0 };           ///< box constraint on the dual variables
    std::optional<double> gamma;  ///< RBF width; unset means "scale": 1 / (n_features * Var(X))
    double tol{ 1e-3 };           ///< stop when the maximal KKT violation falls below this
    std::size_t max_iter{ 0 };    ///< 0: max(10^7, 100 n)
    std::size_t cache_bytes{ std::size_t{ 64 } << 20 };
};

/// Resolves the "scale" gamma heuristic for a training matrix.
[[nodiscard]] double scale_gamma(const Matrix &x);

/// Trained RBF soft-margin classifier. Immutable; predictions are thread-safe.
class SvmModel {
  public:
    [[nodiscard]] const Matrix &support_vectors() const noexcept { return support_; }
    /// alpha_i * y_i for each support vector
    [[nodiscard]] const Vector &dual_coefficients() const noexcept { return coef_; }
    /// Row indices of the support vectors in the training matrix.
    [[nodiscard]] const std::vector<std::size_t> &support_indices() const noexcept { return support_indices_; }
    [[nodiscard]] double bias() const noexcept { return bias_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] double c_reg() const noexcept { return c_reg_; }
    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
    [[nodiscard]] bool converged() const noexcept { return converged_; }
    /// Dual objective sum(alpha) - 1/2 alpha^T Q alpha at the solution.
    [[nodiscard]] double dual_objective() const noexcept { return objective_; }

    [[nodiscard]] Vector decision_function(const Matrix &x) const;
    /// sign of the decision function, with sign(0) = +1
    [[nodiscard]] std::vector<int> predict(const Matrix &x) const;

  private:
    friend SvmModel train_svm(const Matrix &, std::span<const int>, const SvmParams &);

    Matrix support_;
    Vector coef_;
    std::vector<std::size_t> support_indices_;
    double bias_{ 0.0 };
    double gamma_{ 1.0 };
    double c_reg_{ 1.0 };
    std::size_t iterations_{ 0 };
    bool converged_{ false };
    double objective_{ 0.0 };
};

/**
 * Sequential minimal optimisation on the C-SVM dual with kernel exp(-gamma ||a - b||^2).
 *
 * The working pair is the maximal violating index i (lowest index on ties) together with the j giving the largest
 * second-order objective gain, so training is fully deterministic. Kernel rows are cached (LRU) up to
 * `cache_bytes`. Labels must be +1 / -1 with both present.
 */
[[nodiscard]] SvmModel train_svm(const Matrix &x, std::span<const int> y, const SvmParams &params = {});

}  // namespace imb
