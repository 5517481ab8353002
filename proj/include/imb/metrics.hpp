#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace imb {

/// 2x2 table with the minority class as positive.
struct ConfusionCounts {
    std::size_t tp{ 0 };
    std::size_t fp{ 0 };
    std::size_t fn{ 0 };
    std::size_t tn{ 0 };

    [[nodiscard]] std::size_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionCounts &, const ConfusionCounts &) = default;
};

[[nodiscard]] ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred, int positive_label);

// Zero denominators yield 0.
[[nodiscard]] double precision(const ConfusionCounts &c) noexcept;
[[nodiscard]] double recall(const ConfusionCounts &c) noexcept;
[[nodiscard]] double f_beta(const ConfusionCounts &c, double beta);
[[nodiscard]] double minority_accuracy(const ConfusionCounts &c) noexcept;
[[nodiscard]] double overall_accuracy(const ConfusionCounts &c) noexcept;

/// Per-fold scores with their mean and population variance.
struct CvSummary {
    std::vector<double> folds;
    double mean{ 0.0 };
    double variance{ 0.0 };
};

[[nodiscard]] CvSummary aggregate(std::span<const double> folds);

}  // namespace imb
