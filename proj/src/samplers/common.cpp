#include "detail.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace imb {

namespace {

constexpr std::array<std::pair<SamplerKind, std::string_view>, 8> kind_names{ {
    { SamplerKind::none, "none" },
    { SamplerKind::ros, "ros" },
    { SamplerKind::smote, "smote" },
    { SamplerKind::bsmote1, "bsmote1" },
    { SamplerKind::bsmote2, "bsmote2" },
    { SamplerKind::svmsmote, "svmsmote" },
    { SamplerKind::adasyn, "adasyn" },
    { SamplerKind::adaptive_gmm, "adaptive_gmm" },
} };

}  // namespace

std::string_view to_string(SamplerKind kind) noexcept {
    for (const auto &[k, name] : kind_names) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

SamplerKind parse_sampler_kind(std::string_view name) {
    for (const auto &[k, n] : kind_names) {
        if (n == name) {
            return k;
        }
    }
    throw invalid_argument{ fmt::format("unknown sampler '{}' (expected one of none, ros, smote, bsmote1, bsmote2, svmsmote, adasyn, adaptive_gmm)", name) };
}

bool uses_neighbors(SamplerKind kind) noexcept {
    return kind != SamplerKind::none && kind != SamplerKind::ros;
}

bool uses_eta(SamplerKind kind) noexcept { return kind == SamplerKind::adaptive_gmm; }

void SamplerSpec::validate() const {
    if (k_neighbors < 1) {
        throw invalid_argument{ "K must be at least 1" };
    }
    if (subdivisions < 1) {
        throw invalid_argument{ "r must be at least 1" };
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw invalid_argument{ fmt::format("eta must lie in (0, 1], got {}", eta) };
    }
    if (!(prob_threshold >= 0.0 && prob_threshold <= 1.0) || !(weight_threshold >= 0.0 && weight_threshold <= 1.0)) {
        throw invalid_argument{ "p_t and w_t must lie in [0, 1]" };
    }
}

std::vector<std::size_t> largest_remainder(std::span<const double> quotas, std::size_t total) {
    std::vector<std::size_t> out(quotas.size(), 0);
    if (quotas.empty()) {
        if (total > 0) {
            throw invalid_argument{ "cannot distribute a non-zero total over zero slots" };
        }
        return out;
    }
    std::vector<double> frac(quotas.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < quotas.size(); ++i) {
        const double q = std::max(0.0, quotas[i]);
        out[i] = static_cast<std::size_t>(std::floor(q));
        frac[i] = q - std::floor(q);
        assigned += out[i];
    }
    // rounding in the quotas can overshoot by one; take back from the smallest remainders
    while (assigned > total) {
        std::size_t pick = quotas.size();
        for (std::size_t i = 0; i < quotas.size(); ++i) {
            if (out[i] > 0 && (pick == quotas.size() || frac[i] < frac[pick])) {
                pick = i;
            }
        }
        --out[pick];
        frac[pick] += 1.0;
        --assigned;
    }
    // zero quotas never receive a unit
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < quotas.size(); ++i) {
        if (quotas[i] > 0.0) {
            order.push_back(i);
        }
    }
    if (order.empty() && assigned < total) {
        throw invalid_argument{ "cannot distribute a non-zero total over all-zero quotas" };
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t r = 0; assigned < total; r = (r + 1) % order.size()) {
        ++out[order[r]];
        ++assigned;
    }
    return out;
}

std::vector<std::size_t> allocate_counts(std::span<const double> w, std::size_t total, std::span<const std::size_t> cluster_sizes) {
    if (!cluster_sizes.empty() && cluster_sizes.size() != w.size()) {
        throw invalid_argument{ "cluster sizes must match the weight vector" };
    }
    if (std::any_of(w.begin(), w.end(), [](double v) { return !(v >= 0.0); })) {
        throw invalid_argument{ "cluster weights must be non-negative" };
    }
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> quotas(w.size(), 0.0);
    if (sum > 0.0) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            quotas[i] = static_cast<double>(total) * w[i] / sum;
        }
    } else {
        std::size_t eligible = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            eligible += cluster_sizes.empty() || cluster_sizes[i] > 0 ? 1 : 0;
        }
        if (total > 0) {
            spdlog::warn("all cluster weights are zero; splitting {} samples evenly over {} non-empty clusters", total, eligible);
        }
        for (std::size_t i = 0; i < w.size() && eligible > 0; ++i) {
            if (cluster_sizes.empty() || cluster_sizes[i] > 0) {
                quotas[i] = static_cast<double>(total) / static_cast<double>(eligible);
            }
        }
    }
    return largest_remainder(quotas, total);
}

namespace detail {

ClassSplit split_classes(const LabeledDataset &d) {
    ClassSplit s;
    s.minority_rows = d.indices_of(d.minority_label());
    s.minority = d.rows_of(d.minority_label());
    s.n_minority = s.minority_rows.size();
    s.n_majority = d.majority_count();
    return s;
}

std::size_t effective_k(std::size_t k, std::size_t n_points, std::string_view who) {
    if (n_points < 2) {
        throw invalid_argument{ fmt::format("{} needs at least 2 minority samples, got {}", who, n_points) };
    }
    if (k > n_points - 1) {
        spdlog::warn("{}: K = {} exceeds the {} available neighbours; using K = {}", who, k, n_points - 1, n_points - 1);
        return n_points - 1;
    }
    return k;
}

std::vector<std::vector<Neighbor>> minority_neighbors(const Matrix &minority, std::size_t k) {
    const BallTree tree{ minority };
    return all_knn(tree, k);
}

std::vector<std::vector<Neighbor>> full_neighbors(const LabeledDataset &d, const ClassSplit &split, std::size_t k) {
    const BallTree tree{ d.features() };
    std::vector<std::vector<Neighbor>> out(split.minority_rows.size());
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = tree.knn(split.minority_rows[static_cast<std::size_t>(i)], k);
    }
    return out;
}

std::size_t count_majority(const LabeledDataset &d, const std::vector<Neighbor> &neighbors) {
    std::size_t m = 0;
    for (const Neighbor &nb : neighbors) {
        m += d.labels()[nb.index] == d.majority_label() ? 1 : 0;
    }
    return m;
}

Resampled finish(const LabeledDataset &d, const Matrix &synthetic, std::vector<Provenance> provenance) {
    return Resampled{ d.append_minority(synthetic), std::move(provenance) };
}

std::mt19937_64 make_rng(const SamplerSpec &spec, std::uint64_t stream) {
    return std::mt19937_64{ derive_seed(spec.seed, { static_cast<std::uint64_t>(spec.kind), stream }) };
}

double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>{ lo, hi }(rng);
}

std::size_t uniform_index(std::mt19937_64 &rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>{ 0, n - 1 }(rng);
}

Resampled identity(const LabeledDataset &d) { return Resampled{ d, {} }; }

}  // namespace detail

Resampled random_oversample(const LabeledDataset &d, const SamplerSpec &spec) {
    spec.validate();
    const detail::ClassSplit split = detail::split_classes(d);
    const std::size_t need = split.needed();
    if (need == 0) {
        return detail::identity(d);
    }
    std::mt19937_64 rng = detail::make_rng(spec, 0);
    Matrix synthetic(static_cast<Eigen::Index>(need), split.minority.cols());
    std::vector<Provenance> prov;
    prov.reserve(need);
    for (std::size_t s = 0; s < need; ++s) {
        const std::size_t i = detail::uniform_index(rng, split.n_minority);
        synthetic.row(static_cast<Eigen::Index>(s)) = split.minority.row(static_cast<Eigen::Index>(i));
        prov.push_back({ split.minority_rows[i], split.minority_rows[i], 0.0, Origin::duplicate });
    }
    return detail::finish(d, synthetic, std::move(prov));
}

Resampled resample(const LabeledDataset &d, const SamplerSpec &spec) {
    switch (spec.kind) {
        case SamplerKind::none:
            return detail::identity(d);
        case SamplerKind::ros:
            return random_oversample(d, spec);
        case SamplerKind::smote:
            return smote(d, spec);
        case SamplerKind::bsmote1:
            return borderline_smote(d, spec, 1);
        case SamplerKind::bsmote2:
            return borderline_smote(d, spec, 2);
        case SamplerKind::svmsmote:
            return svm_smote(d, spec);
        case SamplerKind::adasyn:
            return adasyn(d, spec);
        case SamplerKind::adaptive_gmm:
            return adaptive_gmm_resample(d, spec);
    }
    throw invalid_argument{ "unknown sampler kind" };
}

}  // namespace imb
