#pragma once

#include "imb/common.hpp"
#include "imb/data.hpp"
#include "imb/gmm.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace imb {

enum class SamplerKind { none, ros, smote, bsmote1, bsmote2, svmsmote, adasyn, adaptive_gmm };

[[nodiscard]] std::string_view to_string(SamplerKind kind) noexcept;
/// Throws imb::invalid_argument for unknown names.
[[nodiscard]] SamplerKind parse_sampler_kind(std::string_view name);
/// Whether the sampler has a neighbourhood size K to tune.
[[nodiscard]] bool uses_neighbors(SamplerKind kind) noexcept;
/// Whether the sampler has a cluster fraction eta to tune.
[[nodiscard]] bool uses_eta(SamplerKind kind) noexcept;

struct SamplerSpec {
    SamplerKind kind{ SamplerKind::none };
    std::size_t k_neighbors{ 5 };
    std::size_t subdivisions{ 10 };  ///< r: interpolation points per neighbour pair
    double eta{ 0.1 };               ///< cluster count = round((M - N) * eta)
    double prob_threshold{ 0.5 };    ///< p_t
    double weight_threshold{ 0.5 };  ///< w_t
    std::uint64_t seed{ 0 };
    EmConfig em{};  ///< EM settings for the adaptive sampler; its seed is derived from `seed`

    void validate() const;
};

/// How a synthetic row was made from rows of the input dataset.
enum class Origin { duplicate, interpolation, extrapolation };

struct Provenance {
    std::size_t seed_row;
    std::size_t partner_row;
    /// interpolation: seed + alpha (partner - seed); extrapolation: seed + alpha (seed - partner)
    double alpha;
    Origin origin;
};

/// Output of a sampler: the input rows verbatim followed by the synthetic minority rows, one provenance per synthetic row.
struct Resampled {
    LabeledDataset data;
    std::vector<Provenance> provenance;
};

// Every sampler returns a dataset whose minority count equals its majority count, keeps the input rows first and
// bit-exact, and is deterministic given spec.seed. Balanced input is returned unchanged.

[[nodiscard]] Resampled random_oversample(const LabeledDataset &d, const SamplerSpec &spec);
[[nodiscard]] Resampled smote(const LabeledDataset &d, const SamplerSpec &spec);
/// variant 1 or 2
[[nodiscard]] Resampled borderline_smote(const LabeledDataset &d, const SamplerSpec &spec, int variant);
[[nodiscard]] Resampled adasyn(const LabeledDataset &d, const SamplerSpec &spec);
[[nodiscard]] Resampled svm_smote(const LabeledDataset &d, const SamplerSpec &spec);

// ---------------------------------------------------------------------------------------------------------------
// adaptive GMM oversampler

struct SyntheticPool {
    struct Parents {
        std::size_t seed;      ///< minority row of s_n
        std::size_t neighbor;  ///< minority row of s_k
        double alpha;          ///< j / r
    };

    Matrix points;
    std::vector<Parents> parents;
    std::vector<std::size_t> cluster_of;  ///< filled once the mixture is fitted

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
};

/**
 * For every minority sample s_n and each of its K nearest minority neighbours s_k, emits s_n + (j/r)(s_k - s_n) for
 * j = 1..r (j = r is s_k itself). Exact duplicates are dropped, keeping the first occurrence.
 */
[[nodiscard]] SyntheticPool smote_grid_generate(const Matrix &minority, std::size_t k, std::size_t r);

struct ClusterWeighting {
    std::vector<std::size_t> q;           ///< majority samples whose responsibility for the cluster exceeds p_t
    std::vector<double> w;                ///< 1 - q/M if that exceeds w_t, else 0
    std::vector<std::size_t> allocation;  ///< synthetic samples drawn from the cluster
};

[[nodiscard]] ClusterWeighting cluster_weights(const GmmModel &model, const Matrix &majority, double p_t, double w_t,
                                               std::size_t m);

/// Largest-remainder rounding of non-negative real quotas to integers summing to `total`; ties go to the lower index.
[[nodiscard]] std::vector<std::size_t> largest_remainder(std::span<const double> quotas, std::size_t total);

/**
 * Splits `total` over clusters in proportion to `w`. If every weight is zero, falls back to an even split over the
 * clusters with a non-zero entry in `cluster_sizes` (all clusters when `cluster_sizes` is empty).
 */
[[nodiscard]] std::vector<std::size_t> allocate_counts(std::span<const double> w, std::size_t total,
                                                       std::span<const std::size_t> cluster_sizes = {});

/// Intermediate state of one adaptive run, for inspection and tests.
struct AdaptiveTrace {
    SyntheticPool pool;
    std::size_t components{ 0 };
    ClusterWeighting weighting;
    std::vector<std::size_t> selected;  ///< pool indices appended to the output, in output order
    std::size_t drawn_with_replacement{ 0 };
};

/**
 * Grid-SMOTE pool, GMM over minority plus pool, clusters weighted by how many majority samples they claim, then
 * N_i pool points drawn per cluster without replacement.
 */
[[nodiscard]] Resampled adaptive_gmm_resample(const LabeledDataset &d, const SamplerSpec &spec, AdaptiveTrace *trace = nullptr);

/// Dispatches on spec.kind.
[[nodiscard]] Resampled resample(const LabeledDataset &d, const SamplerSpec &spec);

}  // namespace imb
