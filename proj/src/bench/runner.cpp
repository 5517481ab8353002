#include "imb/bench.hpp"

#include "imb/svm.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <omp.h>

#include <array>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <unordered_set>

namespace imb::bench {

namespace {

using FoldScores = std::array<double, 4>;

std::string row_key(const Matrix &m, Eigen::Index row) {
    std::string key(static_cast<std::size_t>(m.cols()) * sizeof(double), '\0');
    std::memcpy(key.data(), m.row(row).data(), key.size());
    return key;
}

// A test row counts as leaked only if its bytes reach the resampler without a bit-identical twin in the training rows
// of the source data.
void audit_fold(const LabeledDataset &d, const Fold &fold, const Matrix &resampler_input, const Matrix &test_std) {
    std::unordered_set<std::string> train_raw;
    for (const std::size_t i : fold.train) {
        train_raw.insert(row_key(d.features(), static_cast<Eigen::Index>(i)));
    }
    std::unordered_set<std::string> input;
    for (Eigen::Index i = 0; i < resampler_input.rows(); ++i) {
        input.insert(row_key(resampler_input, i));
    }
    for (std::size_t t = 0; t < fold.test.size(); ++t) {
        const auto ti = static_cast<Eigen::Index>(t);
        if (input.contains(row_key(test_std, ti)) && !train_raw.contains(row_key(d.features(), static_cast<Eigen::Index>(fold.test[t])))) {
            throw error{ fmt::format("leak: test row {} reached the resampler input", fold.test[t]) };
        }
    }
}

FoldScores score_fold(const LabeledDataset &d, const Fold &fold, const SamplerSpec &spec, std::size_t fold_index,
                      bool audit) {
    const LabeledDataset train_raw = d.subset(fold.train);
    const Standardizer standardizer = fit_standardizer(train_raw);
    const LabeledDataset train = apply_standardizer(standardizer, train_raw);
    const LabeledDataset test = apply_standardizer(standardizer, d.subset(fold.test));

    if (audit) {
        audit_fold(d, fold, train.features(), test.features());
    }

    SamplerSpec fold_spec = spec;
    fold_spec.seed = derive_seed(spec.seed, { fold_index });
    const LabeledDataset balanced = resample(train, fold_spec).data;

    // the positive class is the minority of the full dataset, whatever a fold's counts say
    const int positive = d.minority_label();
    std::vector<int> y(balanced.n_samples());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = balanced.labels()[i] == positive ? 1 : -1;
    }
    const SvmModel model = train_svm(balanced.features(), y);
    const std::vector<int> predicted = model.predict(test.features());
    std::vector<int> truth(test.n_samples());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        truth[i] = test.labels()[i] == positive ? 1 : -1;
    }
    const ConfusionCounts c = confusion(truth, predicted, 1);
    return { f_beta(c, 1.0), f_beta(c, 2.0), minority_accuracy(c), overall_accuracy(c) };
}

CvResult summarize(const std::vector<FoldScores> &scores) {
    CvResult r;
    for (std::size_t m = 0; m < all_metrics().size(); ++m) {
        std::vector<double> column;
        column.reserve(scores.size());
        for (const FoldScores &s : scores) {
            column.push_back(s[m]);
        }
        r.metrics.push_back(aggregate(column));
    }
    return r;
}

/// Runs `count` independent units on `workers` threads; the first exception (lowest unit index) is rethrown.
template <typename F>
void for_units(std::size_t count, std::size_t workers, F &&body) {
    std::vector<std::exception_ptr> failures(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(workers)) if (workers > 1)
    for (std::ptrdiff_t u = 0; u < n; ++u) {
        try {
            body(static_cast<std::size_t>(u));
        } catch (...) {
            failures[static_cast<std::size_t>(u)] = std::current_exception();
        }
    }
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
}

}  // namespace

std::string format_params(const SamplerSpec &spec) {
    if (uses_eta(spec.kind)) {
        return fmt::format("K={};eta={}", spec.k_neighbors, spec.eta);
    }
    if (uses_neighbors(spec.kind)) {
        return fmt::format("K={}", spec.k_neighbors);
    }
    return "-";
}

const CvSummary &ReportRow::at(Metric m) const {
    for (const auto &[metric, summary] : metrics) {
        if (metric == m) {
            return summary;
        }
    }
    throw invalid_argument{ fmt::format("report row has no metric '{}'", to_string(m)) };
}

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("IMBENCH_WORKERS"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
        spdlog::warn("ignoring IMBENCH_WORKERS='{}'; expected a positive integer", env);
    }
    return static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
}

CvResult cross_validate(const LabeledDataset &d, const FoldPlan &plan, const SamplerSpec &spec, const FoldOptions &opts) {
    std::vector<FoldScores> scores(plan.folds.size());
    const std::size_t workers = opts.workers == 0 ? static_cast<std::size_t>(std::max(1, omp_get_max_threads())) : opts.workers;
    for_units(plan.folds.size(), workers, [&](std::size_t f) { scores[f] = score_fold(d, plan.folds[f], spec, f, opts.audit); });
    return summarize(scores);
}

ExperimentReport run(const ExperimentConfig &config, const RunOptions &opts) {
    config.validate();
    const std::size_t workers = resolve_workers(opts.workers);
    ExperimentReport report;
    report.metrics = config.metrics;

    for (const DatasetSource &source : config.datasets) {
        try {
            const LabeledDataset d = load(source);
            const FoldPlan plan = stratified_kfold(d, config.folds, derive_seed(config.seed, { hash_tag(source.name) }));
            spdlog::info("{}: {} samples, {} minority, {} folds", source.name, d.n_samples(), d.minority_count(), plan.k);

            // every (sampler, grid point, fold) is one unit
            struct Unit {
                std::size_t sampler;
                std::size_t point;
                std::size_t fold;
            };
            std::vector<std::vector<SamplerSpec>> grids;
            std::vector<Unit> units;
            for (std::size_t s = 0; s < config.samplers.size(); ++s) {
                const SamplerGrid &g = config.samplers[s];
                grids.push_back(g.points());
                for (std::size_t p = 0; p < grids.back().size(); ++p) {
                    grids.back()[p].seed = derive_seed(config.seed, { hash_tag(source.name), hash_tag(g.name), p });
                    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
                        units.push_back({ s, p, f });
                    }
                }
            }
            std::vector<FoldScores> scores(units.size());
            for_units(units.size(), workers, [&](std::size_t u) {
                const Unit &unit = units[u];
                scores[u] = score_fold(d, plan.folds[unit.fold], grids[unit.sampler][unit.point], unit.fold, opts.audit);
            });

            std::size_t u = 0;
            for (std::size_t s = 0; s < config.samplers.size(); ++s) {
                std::optional<CvResult> best;
                std::size_t best_point = 0;
                for (std::size_t p = 0; p < grids[s].size(); ++p) {
                    const std::vector<FoldScores> fold_scores(scores.begin() + static_cast<std::ptrdiff_t>(u),
                                                              scores.begin() + static_cast<std::ptrdiff_t>(u + plan.folds.size()));
                    u += plan.folds.size();
                    CvResult r = summarize(fold_scores);
                    if (!best || r.at(Metric::f1).mean > best->at(Metric::f1).mean) {
                        best = std::move(r);
                        best_point = p;
                    }
                }
                ReportRow row;
                row.dataset = source.name;
                row.sampler = config.samplers[s].name;
                row.chosen = grids[s][best_point];
                for (const Metric m : config.metrics) {
                    row.metrics.emplace_back(m, best->at(m));
                }
                spdlog::info("{} / {}: {} F1 {:.4f}", row.dataset, row.sampler, format_params(row.chosen), row.at(Metric::f1).mean);
                report.rows.push_back(std::move(row));
            }
        } catch (const std::exception &e) {
            spdlog::error("dataset '{}' skipped: {}", source.name, e.what());
        }
    }
    return report;
}

}  // namespace imb::bench
