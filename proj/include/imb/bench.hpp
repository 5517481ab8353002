#pragma once

#include "imb/data.hpp"
#include "imb/metrics.hpp"
#include "imb/samplers.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace imb::bench {

enum class Metric { f1, f2, minority_acc, overall_acc };

[[nodiscard]] std::string_view to_string(Metric m) noexcept;
[[nodiscard]] Metric parse_metric(std::string_view name);
[[nodiscard]] const std::vector<Metric> &all_metrics();

struct KeelSource {
    std::filesystem::path path;
    std::optional<std::string> positive_label;
};

struct CsvSource {
    std::filesystem::path path;
    CsvOptions options;
};

struct CloverSource {
    std::size_t majority{ 500 };
    std::size_t minority{ 100 };
    int disturbance{ 0 };
    std::uint64_t seed{ 0 };
};

struct DatasetSource {
    std::string name;
    std::variant<KeelSource, CsvSource, CloverSource> source;
};

[[nodiscard]] LabeledDataset load(const DatasetSource &src);

/// One sampler with its hyperparameter grid. Grid points are ordered by K, then eta, both ascending.
struct SamplerGrid {
    std::string name;  ///< column label in reports; the sampler kind unless overridden
    SamplerSpec base;
    std::vector<std::size_t> k_values;
    std::vector<double> eta_values;

    /// The grid expanded to concrete specs (seed left at the base value).
    [[nodiscard]] std::vector<SamplerSpec> points() const;
};

/// Default grid for a sampler kind: K in 2..10 where K applies, eta in 0.1..1.0 where eta applies.
[[nodiscard]] SamplerGrid default_grid(SamplerKind kind);

enum class Format { csv, markdown };

struct OutputSpec {
    std::filesystem::path path;
    Format format{ Format::markdown };
};

struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    std::vector<SamplerGrid> samplers;
    std::size_t folds{ 5 };
    std::uint64_t seed{ 0 };
    std::vector<Metric> metrics{ all_metrics() };
    std::optional<OutputSpec> output;

    void validate() const;
};

/// Parses JSON config text; relative file paths are resolved against `base_dir`. Unknown keys are rejected.
[[nodiscard]] ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path &base_dir);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path &path);

/// Fold scores for every metric in all_metrics() order.
struct CvResult {
    std::vector<CvSummary> metrics;

    [[nodiscard]] const CvSummary &at(Metric m) const { return metrics[static_cast<std::size_t>(m)]; }
};

struct FoldOptions {
    /// Verify that no test row reaches the resampler; throws imb::error on a leak.
    bool audit{ false };
    /// Threads across folds; 0 keeps the OpenMP default.
    std::size_t workers{ 0 };
};

/**
 * Cross-validates one sampler setting. Per fold: standardizer fitted on the training rows, training rows
 * resampled with seed derive_seed(spec.seed, {fold}), RBF SVM (C = 1, gamma "scale") trained and scored on the
 * untouched test rows.
 */
[[nodiscard]] CvResult cross_validate(const LabeledDataset &d, const FoldPlan &plan, const SamplerSpec &spec,
                                      const FoldOptions &opts = {});

/// Compact "K=5;eta=0.1" style rendering of the tuned hyperparameters ("-" when there are none).
[[nodiscard]] std::string format_params(const SamplerSpec &spec);

struct ReportRow {
    std::string dataset;
    std::string sampler;
    SamplerSpec chosen;
    std::vector<std::pair<Metric, CvSummary>> metrics;

    [[nodiscard]] const CvSummary &at(Metric m) const;
};

struct ExperimentReport {
    std::vector<Metric> metrics;
    std::vector<ReportRow> rows;
};

struct RunOptions {
    /// 0: IMBENCH_WORKERS if set, else the OpenMP default.
    std::size_t workers{ 0 };
    bool audit{ false };
};

/// Resolves the worker count from the option, the IMBENCH_WORKERS variable and the OpenMP default.
[[nodiscard]] std::size_t resolve_workers(std::size_t requested);

/**
 * Grid search per (dataset, sampler): every grid point is cross-validated on the same folds and the point with
 * the highest mean F1 is reported (ties to the earlier grid point). A dataset that fails to load or run is logged
 * and left out of the report.
 */
[[nodiscard]] ExperimentReport run(const ExperimentConfig &config, const RunOptions &opts = {});

/// Values are printed with 4 decimals.
[[nodiscard]] std::string render_csv(const ExperimentReport &report);
/// One table per metric; datasets as rows, samplers as columns, best rounded mean per row in bold.
[[nodiscard]] std::string render_markdown(const ExperimentReport &report);
void emit(const ExperimentReport &report, Format format, const std::filesystem::path &path);

/// Command-line entry point. Returns 0 on success, 1 on usage errors, 2 on runtime failures.
int cli(int argc, const char *const *argv);

}  // namespace imb::bench
