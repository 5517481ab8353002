#pragma once

#include "imb/common.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace imb {

struct Neighbor {
    std::size_t index;
    double distance;

    friend bool operator==(const Neighbor &, const Neighbor &) = default;
};

/**
 * Exact Euclidean k-nearest-neighbour index.
 *
 * Nodes split on the dimension of largest spread at the median (ties by lower index); each node stores the centroid
 * of its points and the radius enclosing them. The tree owns a copy of the points and is immutable after
 * construction, so concurrent queries are safe.
 */
class BallTree {
  public:
    struct Node {
        Vector centroid;
        double radius{ 0.0 };
        std::size_t begin{ 0 };  ///< range into indices()
        std::size_t end{ 0 };
        int left{ -1 };  ///< child node ids, -1 for leaves
        int right{ -1 };

        [[nodiscard]] bool is_leaf() const noexcept { return left < 0; }
    };

    static constexpr std::size_t default_leaf_size = 16;

    explicit BallTree(Matrix points, std::size_t leaf_size = default_leaf_size);

    /// The k nearest points to point `query_index`, excluding that index itself. Ascending by distance, ties by index.
    [[nodiscard]] std::vector<Neighbor> knn(std::size_t query_index, std::size_t k) const;

    /// The k nearest indexed points to an arbitrary query, optionally skipping one index.
    [[nodiscard]] std::vector<Neighbor> knn_point(const Eigen::Ref<const RowVector> &query, std::size_t k,
                                                  std::optional<std::size_t> exclude = std::nullopt) const;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    [[nodiscard]] std::size_t leaf_size() const noexcept { return leaf_size_; }
    [[nodiscard]] const Matrix &points() const noexcept { return points_; }
    [[nodiscard]] const std::vector<Node> &nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<std::size_t> &indices() const noexcept { return indices_; }

  private:
    int build(std::size_t begin, std::size_t end);

    Matrix points_;
    std::size_t leaf_size_;
    std::vector<std::size_t> indices_;
    std::vector<Node> nodes_;
};

/// knn(i, k) for every indexed point; the OpenMP version fans queries out across threads.
[[nodiscard]] std::vector<std::vector<Neighbor>> all_knn(const BallTree &tree, std::size_t k);

namespace serial {
[[nodiscard]] std::vector<std::vector<Neighbor>> all_knn(const BallTree &tree, std::size_t k);
}  // namespace serial

}  // namespace imb
