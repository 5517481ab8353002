#include "detail.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <unordered_set>

namespace imb {

namespace {

std::string row_bytes(const Matrix &m, Eigen::Index row) {
    std::string key(static_cast<std::size_t>(m.cols()) * sizeof(double), '\0');
    std::memcpy(key.data(), m.row(row).data(), key.size());
    return key;
}

bool zero_variance(const Matrix &minority) {
    for (Eigen::Index i = 1; i < minority.rows(); ++i) {
        if (minority.row(i) != minority.row(0)) {
            return false;
        }
    }
    return true;
}

/// Draws `count` distinct entries of `members` not yet taken; `taken` tracks the used prefix of a running shuffle.
void draw_without_replacement(std::vector<std::size_t> &members, std::size_t &taken, std::size_t count, std::mt19937_64 &rng,
                              std::vector<std::size_t> &out) {
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t pick = taken + detail::uniform_index(rng, members.size() - taken);
        std::swap(members[taken], members[pick]);
        out.push_back(members[taken]);
        ++taken;
    }
}

}  // namespace

SyntheticPool smote_grid_generate(const Matrix &minority, std::size_t k, std::size_t r) {
    if (r < 1) {
        throw invalid_argument{ "r must be at least 1" };
    }
    const auto n = static_cast<std::size_t>(minority.rows());
    k = detail::effective_k(k, n, "grid SMOTE");
    const auto nn = detail::minority_neighbors(minority, k);

    SyntheticPool pool;
    Matrix points(static_cast<Eigen::Index>(n * k * r), minority.cols());
    std::unordered_set<std::string> seen;
    seen.reserve(n * k * r);
    Eigen::Index kept = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto sn = minority.row(static_cast<Eigen::Index>(s));
        for (const Neighbor &nb : nn[s]) {
            const auto sk = minority.row(static_cast<Eigen::Index>(nb.index));
            for (std::size_t j = 1; j <= r; ++j) {
                const double alpha = static_cast<double>(j) / static_cast<double>(r);
                if (j == r) {
                    points.row(kept) = sk;
                } else {
                    points.row(kept) = sn + alpha * (sk - sn);
                }
                // -0.0 and 0.0 are the same coordinate
                points.row(kept).array() += 0.0;
                if (seen.insert(row_bytes(points, kept)).second) {
                    pool.parents.push_back({ s, nb.index, alpha });
                    ++kept;
                }
            }
        }
    }
    pool.points = points.topRows(kept);
    return pool;
}

ClusterWeighting cluster_weights(const GmmModel &model, const Matrix &majority, double p_t, double w_t, std::size_t m) {
    ClusterWeighting cw;
    cw.q.assign(model.components(), 0);
    if (majority.rows() > 0) {
        const Matrix resp = model.responsibilities(majority);
        for (Eigen::Index j = 0; j < resp.rows(); ++j) {
            for (Eigen::Index i = 0; i < resp.cols(); ++i) {
                cw.q[static_cast<std::size_t>(i)] += resp(j, i) > p_t ? 1 : 0;
            }
        }
    }
    cw.w.resize(model.components());
    for (std::size_t i = 0; i < cw.q.size(); ++i) {
        const double v = m == 0 ? 1.0 : 1.0 - static_cast<double>(cw.q[i]) / static_cast<double>(m);
        cw.w[i] = v > w_t ? v : 0.0;
    }
    return cw;
}

Resampled adaptive_gmm_resample(const LabeledDataset &d, const SamplerSpec &spec, AdaptiveTrace *trace) {
    spec.validate();
    const detail::ClassSplit split = detail::split_classes(d);
    if (split.n_minority < 2) {
        throw invalid_argument{ fmt::format("adaptive GMM needs at least 2 minority samples, got {}", split.n_minority) };
    }
    const std::size_t need = split.needed();
    if (need == 0) {
        return detail::identity(d);
    }
    if (zero_variance(split.minority)) {
        throw invalid_argument{ "cannot synthesize from zero-variance minority class" };
    }

    SyntheticPool pool = smote_grid_generate(split.minority, spec.k_neighbors, spec.subdivisions);

    Matrix fit_points(static_cast<Eigen::Index>(split.n_minority + pool.size()), split.minority.cols());
    fit_points << split.minority, pool.points;
    const auto requested = static_cast<std::size_t>(std::max(1.0, std::round(static_cast<double>(need) * spec.eta)));
    std::size_t c = requested;
    if (c > static_cast<std::size_t>(fit_points.rows())) {
        c = static_cast<std::size_t>(fit_points.rows());
        spdlog::warn("adaptive GMM: {} clusters requested but only {} points; using {}", requested, c, c);
    }
    EmConfig em = spec.em;
    em.seed = derive_seed(spec.seed, { static_cast<std::uint64_t>(spec.kind), 0x656dULL });
    const GmmModel model = fit_gmm(fit_points, c, em);

    pool.cluster_of = model.hard_assign(pool.points);
    std::vector<std::vector<std::size_t>> members(c);
    for (std::size_t p = 0; p < pool.size(); ++p) {
        members[pool.cluster_of[p]].push_back(p);
    }
    std::vector<std::size_t> sizes(c);
    for (std::size_t i = 0; i < c; ++i) {
        sizes[i] = members[i].size();
    }

    ClusterWeighting weighting = cluster_weights(model, d.rows_of(d.majority_label()), spec.prob_threshold,
                                                 spec.weight_threshold, split.n_majority);
    const std::vector<std::size_t> planned = allocate_counts(weighting.w, need, sizes);

    // clusters allowed to receive samples: positive weight, or every non-empty cluster under the even fallback
    const bool any_weight = std::any_of(weighting.w.begin(), weighting.w.end(), [](double v) { return v > 0.0; });
    std::vector<double> share(c, 0.0);
    for (std::size_t i = 0; i < c; ++i) {
        share[i] = any_weight ? weighting.w[i] : (sizes[i] > 0 ? 1.0 : 0.0);
    }

    std::mt19937_64 rng = detail::make_rng(spec, 0);
    std::vector<std::vector<std::size_t>> picked(c);
    std::vector<std::size_t> taken(c, 0);
    std::size_t shortfall = 0;
    for (std::size_t i = 0; i < c; ++i) {
        const std::size_t n = std::min(planned[i], sizes[i]);
        draw_without_replacement(members[i], taken[i], n, rng, picked[i]);
        shortfall += planned[i] - n;
    }
    if (shortfall > 0) {
        spdlog::warn("adaptive GMM: clusters short by {} pool points; redistributing", shortfall);
    }
    while (shortfall > 0) {
        std::vector<double> quotas(c, 0.0);
        double total_share = 0.0;
        for (std::size_t i = 0; i < c; ++i) {
            if (share[i] > 0.0 && taken[i] < sizes[i]) {
                total_share += share[i];
            }
        }
        if (total_share == 0.0) {
            break;
        }
        for (std::size_t i = 0; i < c; ++i) {
            if (share[i] > 0.0 && taken[i] < sizes[i]) {
                quotas[i] = static_cast<double>(shortfall) * share[i] / total_share;
            }
        }
        const std::vector<std::size_t> extra = largest_remainder(quotas, shortfall);
        for (std::size_t i = 0; i < c; ++i) {
            const std::size_t n = std::min(extra[i], sizes[i] - taken[i]);
            draw_without_replacement(members[i], taken[i], n, rng, picked[i]);
            shortfall -= n;
        }
    }

    std::size_t with_replacement = 0;
    if (shortfall > 0) {
        std::vector<std::size_t> eligible;
        for (std::size_t i = 0; i < c; ++i) {
            if (share[i] > 0.0) {
                eligible.push_back(i);
            }
        }
        std::sort(eligible.begin(), eligible.end());
        std::vector<std::size_t> candidates;
        for (const std::size_t i : eligible) {
            candidates.insert(candidates.end(), members[i].begin(), members[i].end());
        }
        if (candidates.empty()) {
            spdlog::warn("adaptive GMM: no weighted cluster holds pool points; drawing from the whole pool");
            candidates.resize(pool.size());
            std::iota(candidates.begin(), candidates.end(), std::size_t{ 0 });
        }
        std::sort(candidates.begin(), candidates.end());
        spdlog::warn("adaptive GMM: eligible pool holds {} points for {} required; drawing {} with replacement",
                     candidates.size(), need, shortfall);
        for (; shortfall > 0; --shortfall) {
            const std::size_t p = candidates[detail::uniform_index(rng, candidates.size())];
            picked[pool.cluster_of[p]].push_back(p);
            ++with_replacement;
        }
    }

    std::vector<std::size_t> selected;
    selected.reserve(need);
    weighting.allocation.assign(c, 0);
    for (std::size_t i = 0; i < c; ++i) {
        weighting.allocation[i] = picked[i].size();
        selected.insert(selected.end(), picked[i].begin(), picked[i].end());
    }

    Matrix synthetic(static_cast<Eigen::Index>(selected.size()), split.minority.cols());
    std::vector<Provenance> prov;
    prov.reserve(selected.size());
    for (std::size_t s = 0; s < selected.size(); ++s) {
        const std::size_t p = selected[s];
        synthetic.row(static_cast<Eigen::Index>(s)) = pool.points.row(static_cast<Eigen::Index>(p));
        const SyntheticPool::Parents &par = pool.parents[p];
        prov.push_back({ split.minority_rows[par.seed], split.minority_rows[par.neighbor], par.alpha, Origin::interpolation });
    }

    if (trace != nullptr) {
        trace->pool = std::move(pool);
        trace->components = c;
        trace->weighting = weighting;
        trace->selected = selected;
        trace->drawn_with_replacement = with_replacement;
    }
    return detail::finish(d, synthetic, std::move(prov));
}

}  // namespace imb
