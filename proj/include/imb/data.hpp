#pragma once

#include "imb/common.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace imb {

/**
 * Dense binary classification data set.
 *
 * Labels are stored as class indices (0 or 1) into `class_names`; classes are numbered in order of first
 * appearance in the source. `minority_label` is the index of the rarer class (ties resolved by the caller's
 * positive label at construction time).
 */
class LabeledDataset {
  public:
    LabeledDataset() = default;

    /// Validates all invariants; throws imb::invalid_argument or imb::unsupported_dataset_error.
    LabeledDataset(Matrix features, std::vector<int> labels, std::array<std::string, 2> class_names, int minority_label,
                   std::vector<std::string> feature_names = {});

    /**
     * Builds a dataset from textual class tags. The rarer class becomes the minority; on a tie the class equal to
     * `positive_label` wins, falling back to a class called "positive", then to the second class seen.
     */
    static LabeledDataset from_tags(Matrix features, const std::vector<std::string> &tags,
                                    const std::optional<std::string> &positive_label = std::nullopt,
                                    std::vector<std::string> feature_names = {});

    [[nodiscard]] const Matrix &features() const noexcept { return features_; }
    [[nodiscard]] const std::vector<int> &labels() const noexcept { return labels_; }
    [[nodiscard]] const std::array<std::string, 2> &class_names() const noexcept { return class_names_; }
    [[nodiscard]] const std::vector<std::string> &feature_names() const noexcept { return feature_names_; }
    [[nodiscard]] int minority_label() const noexcept { return minority_label_; }
    [[nodiscard]] int majority_label() const noexcept { return 1 - minority_label_; }
    [[nodiscard]] const std::string &label_name(std::size_t row) const { return class_names_[static_cast<std::size_t>(labels_[row])]; }

    [[nodiscard]] std::size_t n_samples() const noexcept { return static_cast<std::size_t>(features_.rows()); }
    [[nodiscard]] std::size_t n_features() const noexcept { return static_cast<std::size_t>(features_.cols()); }
    [[nodiscard]] std::size_t count(int label) const noexcept;
    [[nodiscard]] std::size_t minority_count() const noexcept { return count(minority_label_); }
    [[nodiscard]] std::size_t majority_count() const noexcept { return count(majority_label()); }
    [[nodiscard]] double imbalance_ratio() const noexcept;

    [[nodiscard]] std::vector<std::size_t> indices_of(int label) const;
    [[nodiscard]] Matrix rows_of(int label) const;
    [[nodiscard]] LabeledDataset subset(std::span<const std::size_t> rows) const;
    /// Same labels and metadata, new feature matrix of identical shape.
    [[nodiscard]] LabeledDataset with_features(Matrix features) const;
    /// Appends rows of the minority class.
    [[nodiscard]] LabeledDataset append_minority(const Matrix &rows) const;

    friend bool operator==(const LabeledDataset &a, const LabeledDataset &b);

  private:
    Matrix features_;
    std::vector<int> labels_;
    std::array<std::string, 2> class_names_;
    int minority_label_{ 0 };
    std::vector<std::string> feature_names_;
};

// ---------------------------------------------------------------------------------------------------------------
// loaders

/// Reads a Keel `.dat` file. The class attribute is the `@outputs` attribute, else the last `@attribute`.
[[nodiscard]] LabeledDataset load_keel(const std::filesystem::path &path,
                                       const std::optional<std::string> &positive_label = std::nullopt);

using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvOptions {
    ColumnRef label_column{ std::string{ "class" } };
    std::optional<std::string> positive_label;
    /// Unset: a header is assumed if a name is used for the label column, otherwise detected from the first row.
    std::optional<bool> has_header;
};

[[nodiscard]] LabeledDataset load_csv(const std::filesystem::path &path, const CsvOptions &options = {});

/// Writes `feature..., class` with shortest round-trip number formatting.
void save_csv(const LabeledDataset &data, const std::filesystem::path &path);

// ---------------------------------------------------------------------------------------------------------------
// standardization

struct Standardizer {
    Vector mean;
    Vector scale;  ///< per-feature standard deviation, zero replaced by one
};

[[nodiscard]] Standardizer fit_standardizer(const LabeledDataset &train);
[[nodiscard]] Standardizer fit_standardizer(const Matrix &train);
[[nodiscard]] Matrix apply_standardizer(const Standardizer &s, const Matrix &x);
[[nodiscard]] LabeledDataset apply_standardizer(const Standardizer &s, const LabeledDataset &d);

// ---------------------------------------------------------------------------------------------------------------
// cross-validation

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

struct FoldPlan {
    std::size_t k{ 0 };
    std::uint64_t seed{ 0 };
    std::vector<Fold> folds;
};

/// Per-class seeded shuffle followed by round-robin assignment, so each fold keeps the class ratio (±1 sample).
[[nodiscard]] FoldPlan stratified_kfold(const LabeledDataset &d, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------------------------------------------
// synthetic data

/// Geometry of the clover generator (unit square).
struct CloverGeometry {
    static constexpr double center_x = 0.5;
    static constexpr double center_y = 0.5;
    static constexpr double petal_radius = 0.3;
    static constexpr double border_width = 0.05;
    static constexpr int petals = 5;

    /// Radius of the petal envelope at angle theta.
    [[nodiscard]] static double envelope(double theta) noexcept;
    [[nodiscard]] static bool inside(double x, double y) noexcept;
    /// True if the point lies in the band just outside a petal edge.
    [[nodiscard]] static bool in_border(double x, double y) noexcept;
};

/**
 * Five-petal clover: minority drawn uniformly inside the petals, majority uniformly outside them, and
 * `disturbance_pct` percent of the minority moved into the border band around the petal edges.
 * Majority rows come first. Classes are named "negative" and "positive".
 */
[[nodiscard]] LabeledDataset generate_clover(std::size_t majority_n, std::size_t minority_n, int disturbance_pct,
                                             std::uint64_t seed);

}  // namespace imb
