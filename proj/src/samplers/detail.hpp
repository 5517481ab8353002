#pragma once

#include "imb/neighbors.hpp"
#include "imb/samplers.hpp"

#include <random>
#include <vector>

namespace imb::detail {

struct ClassSplit {
    std::vector<std::size_t> minority_rows;
    Matrix minority;
    std::size_t n_minority;
    std::size_t n_majority;

    [[nodiscard]] std::size_t needed() const noexcept { return n_majority - n_minority; }
};

[[nodiscard]] ClassSplit split_classes(const LabeledDataset &d);

/// K clamped to N - 1, with a warning when it had to be reduced.
[[nodiscard]] std::size_t effective_k(std::size_t k, std::size_t n_points, std::string_view who);

/// Neighbour lists of each minority sample among the minority samples (local indices).
[[nodiscard]] std::vector<std::vector<Neighbor>> minority_neighbors(const Matrix &minority, std::size_t k);

/// Neighbour lists of each minority sample among all samples (dataset row indices).
[[nodiscard]] std::vector<std::vector<Neighbor>> full_neighbors(const LabeledDataset &d, const ClassSplit &split, std::size_t k);

/// Number of majority rows among `neighbors`.
[[nodiscard]] std::size_t count_majority(const LabeledDataset &d, const std::vector<Neighbor> &neighbors);

[[nodiscard]] Resampled finish(const LabeledDataset &d, const Matrix &synthetic, std::vector<Provenance> provenance);

[[nodiscard]] std::mt19937_64 make_rng(const SamplerSpec &spec, std::uint64_t stream);

/// uniform in [lo, hi]
[[nodiscard]] double uniform(std::mt19937_64 &rng, double lo, double hi);
[[nodiscard]] std::size_t uniform_index(std::mt19937_64 &rng, std::size_t n);

[[nodiscard]] Resampled identity(const LabeledDataset &d);

}  // namespace imb::detail
