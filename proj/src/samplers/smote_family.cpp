#include "detail.hpp"

#include "imb/svm.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <numeric>

namespace imb {

namespace {

struct Generator {
    const LabeledDataset &d;
    Matrix out;
    std::vector<Provenance> prov;
    Eigen::Index next{ 0 };

    Generator(const LabeledDataset &data, std::size_t count) :
        d{ data }, out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(data.n_features())) {
        prov.reserve(count);
    }

    // seed + alpha (partner - seed)
    void interpolate(std::size_t seed_row, std::size_t partner_row, double alpha) {
        const auto s = d.features().row(static_cast<Eigen::Index>(seed_row));
        const auto p = d.features().row(static_cast<Eigen::Index>(partner_row));
        out.row(next++) = s + alpha * (p - s);
        prov.push_back({ seed_row, partner_row, alpha, Origin::interpolation });
    }

    // seed + alpha (seed - partner)
    void extrapolate(std::size_t seed_row, std::size_t partner_row, double alpha) {
        const auto s = d.features().row(static_cast<Eigen::Index>(seed_row));
        const auto p = d.features().row(static_cast<Eigen::Index>(partner_row));
        out.row(next++) = s + alpha * (s - p);
        prov.push_back({ seed_row, partner_row, alpha, Origin::extrapolation });
    }

    [[nodiscard]] Resampled finish() && { return detail::finish(d, out, std::move(prov)); }
};

std::size_t full_k(const LabeledDataset &d, std::size_t k) { return std::min(k, d.n_samples() - 1); }

}  // namespace

Resampled smote(const LabeledDataset &d, const SamplerSpec &spec) {
    spec.validate();
    const detail::ClassSplit split = detail::split_classes(d);
    const std::size_t k = detail::effective_k(spec.k_neighbors, split.n_minority, "smote");
    const std::size_t need = split.needed();
    if (need == 0) {
        return detail::identity(d);
    }
    const auto nn = detail::minority_neighbors(split.minority, k);
    std::mt19937_64 rng = detail::make_rng(spec, 0);
    Generator gen{ d, need };
    for (std::size_t s = 0; s < need; ++s) {
        const std::size_t i = s % split.n_minority;
        const std::size_t partner = nn[i][detail::uniform_index(rng, k)].index;
        const double u = detail::uniform(rng, 0.0, 1.0);
        gen.interpolate(split.minority_rows[i], split.minority_rows[partner], u);
    }
    return std::move(gen).finish();
}

Resampled borderline_smote(const LabeledDataset &d, const SamplerSpec &spec, int variant) {
    if (variant != 1 && variant != 2) {
        throw invalid_argument{ fmt::format("borderline-SMOTE variant must be 1 or 2, got {}", variant) };
    }
    spec.validate();
    const detail::ClassSplit split = detail::split_classes(d);
    const std::size_t k = detail::effective_k(spec.k_neighbors, split.n_minority, "borderline-SMOTE");
    const std::size_t need = split.needed();
    if (need == 0) {
        return detail::identity(d);
    }
    const std::size_t kf = full_k(d, spec.k_neighbors);
    const auto full = detail::full_neighbors(d, split, kf);

    // danger: kf/2 <= m' < kf; noisy (m' = kf) and safe points never seed
    std::vector<std::size_t> danger;
    for (std::size_t i = 0; i < split.n_minority; ++i) {
        const std::size_t m = detail::count_majority(d, full[i]);
        if (2 * m >= kf && m < kf) {
            danger.push_back(i);
        }
    }
    if (danger.empty()) {
        spdlog::warn("borderline-SMOTE: no minority sample is in danger; falling back to SMOTE");
        return smote(d, spec);
    }

    const auto nn = detail::minority_neighbors(split.minority, k);
    std::mt19937_64 rng = detail::make_rng(spec, static_cast<std::uint64_t>(variant));
    Generator gen{ d, need };
    for (std::size_t s = 0; s < need; ++s) {
        const std::size_t i = danger[s % danger.size()];
        const std::size_t round = s / danger.size();
        const std::size_t seed_row = split.minority_rows[i];
        if (variant == 2 && round % 2 == 1) {
            std::vector<std::size_t> majority;
            for (const Neighbor &nb : full[i]) {
                if (d.labels()[nb.index] == d.majority_label()) {
                    majority.push_back(nb.index);
                }
            }
            const std::size_t partner = majority[detail::uniform_index(rng, majority.size())];
            gen.interpolate(seed_row, partner, detail::uniform(rng, 0.0, 0.5));
        } else {
            const std::size_t partner = nn[i][detail::uniform_index(rng, k)].index;
            gen.interpolate(seed_row, split.minority_rows[partner], detail::uniform(rng, 0.0, 1.0));
        }
    }
    return std::move(gen).finish();
}

Resampled adasyn(const LabeledDataset &d, const SamplerSpec &spec) {
    spec.validate();
    const detail::ClassSplit split = detail::split_classes(d);
    const std::size_t k = detail::effective_k(spec.k_neighbors, split.n_minority, "ADASYN");
    const std::size_t need = split.needed();
    if (need == 0) {
        return detail::identity(d);
    }
    const std::size_t kf = full_k(d, spec.k_neighbors);
    const auto full = detail::full_neighbors(d, split, kf);

    std::vector<double> ratio(split.n_minority);
    for (std::size_t i = 0; i < split.n_minority; ++i) {
        ratio[i] = static_cast<double>(detail::count_majority(d, full[i])) / static_cast<double>(kf);
    }
    const double sum = std::accumulate(ratio.begin(), ratio.end(), 0.0);
    std::vector<double> quotas(split.n_minority);
    if (sum > 0.0) {
        for (std::size_t i = 0; i < split.n_minority; ++i) {
            quotas[i] = ratio[i] / sum * static_cast<double>(need);
        }
    } else {
        spdlog::warn("ADASYN: no minority sample has a majority neighbour; spreading {} samples evenly", need);
        std::fill(quotas.begin(), quotas.end(), static_cast<double>(need) / static_cast<double>(split.n_minority));
    }
    const std::vector<std::size_t> g = largest_remainder(quotas, need);

    const auto nn = detail::minority_neighbors(split.minority, k);
    std::mt19937_64 rng = detail::make_rng(spec, 0);
    Generator gen{ d, need };
    for (std::size_t i = 0; i < split.n_minority; ++i) {
        for (std::size_t c = 0; c < g[i]; ++c) {
            const std::size_t partner = nn[i][detail::uniform_index(rng, k)].index;
            gen.interpolate(split.minority_rows[i], split.minority_rows[partner], detail::uniform(rng, 0.0, 1.0));
        }
    }
    return std::move(gen).finish();
}

Resampled svm_smote(const LabeledDataset &d, const SamplerSpec &spec) {
    spec.validate();
    const detail::ClassSplit split = detail::split_classes(d);
    const std::size_t k = detail::effective_k(spec.k_neighbors, split.n_minority, "SVM-SMOTE");
    const std::size_t need = split.needed();
    if (need == 0) {
        return detail::identity(d);
    }

    std::vector<int> y(d.n_samples());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = d.labels()[i] == d.minority_label() ? 1 : -1;
    }
    const SvmModel model = train_svm(d.features(), y);

    // local minority index of every minority support vector
    std::vector<std::size_t> seeds;
    for (const std::size_t row : model.support_indices()) {
        if (y[row] == 1) {
            const auto it = std::lower_bound(split.minority_rows.begin(), split.minority_rows.end(), row);
            seeds.push_back(static_cast<std::size_t>(it - split.minority_rows.begin()));
        }
    }
    if (seeds.empty()) {
        spdlog::warn("SVM-SMOTE: no minority support vectors; falling back to SMOTE");
        return smote(d, spec);
    }
    std::sort(seeds.begin(), seeds.end());

    const std::size_t kf = full_k(d, spec.k_neighbors);
    const auto full = detail::full_neighbors(d, split, kf);
    const auto nn = detail::minority_neighbors(split.minority, k);
    std::mt19937_64 rng = detail::make_rng(spec, 0);
    Generator gen{ d, need };
    for (std::size_t s = 0; s < need; ++s) {
        const std::size_t i = seeds[s % seeds.size()];
        const std::size_t seed_row = split.minority_rows[i];
        const std::size_t m = detail::count_majority(d, full[i]);
        const double u = detail::uniform(rng, 0.0, 1.0);
        if (2 * m >= kf) {
            const std::size_t partner = nn[i][detail::uniform_index(rng, k)].index;
            gen.interpolate(seed_row, split.minority_rows[partner], u);
        } else {
            // outward, at most half the distance to the nearest minority neighbour
            gen.extrapolate(seed_row, split.minority_rows[nn[i].front().index], 0.5 * u);
        }
    }
    return std::move(gen).finish();
}

}  // namespace imb
