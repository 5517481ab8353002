#include "imb/metrics.hpp"

#include "imb/common.hpp"

#include <fmt/format.h>

namespace imb {

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred, int positive_label) {
    if (y_true.size() != y_pred.size()) {
        throw invalid_argument{ fmt::format("{} true labels but {} predictions", y_true.size(), y_pred.size()) };
    }
    if (y_true.empty()) {
        throw invalid_argument{ "confusion counts need at least one prediction" };
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == positive_label;
        const bool predicted = y_pred[i] == positive_label;
        if (actual && predicted) {
            ++c.tp;
        } else if (actual) {
            ++c.fn;
        } else if (predicted) {
            ++c.fp;
        } else {
            ++c.tn;
        }
    }
    return c;
}

double precision(const ConfusionCounts &c) noexcept {
    return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const ConfusionCounts &c) noexcept {
    return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f_beta(const ConfusionCounts &c, double beta) {
    if (!(beta > 0.0)) {
        throw invalid_argument{ fmt::format("beta must be positive, got {}", beta) };
    }
    const double p = precision(c);
    const double r = recall(c);
    const double b2 = beta * beta;
    const double denom = b2 * p + r;
    return denom == 0.0 ? 0.0 : (1.0 + b2) * p * r / denom;
}

double minority_accuracy(const ConfusionCounts &c) noexcept { return recall(c); }

double overall_accuracy(const ConfusionCounts &c) noexcept {
    return c.total() == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

CvSummary aggregate(std::span<const double> folds) {
    if (folds.empty()) {
        throw invalid_argument{ "cannot aggregate zero folds" };
    }
    CvSummary s;
    s.folds.assign(folds.begin(), folds.end());
    double sum = 0.0;
    for (const double v : folds) {
        sum += v;
    }
    s.mean = sum / static_cast<double>(folds.size());
    double sq = 0.0;
    for (const double v : folds) {
        sq += (v - s.mean) * (v - s.mean);
    }
    s.variance = sq / static_cast<double>(folds.size());
    return s;
}

}  // namespace imb
