#include "imb/neighbors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace imb {

BallTree::BallTree(Matrix points, std::size_t leaf_size) :
    points_{ std::move(points) },
    leaf_size_{ leaf_size } {
    if (points_.rows() == 0) {
        throw invalid_argument{ "cannot build a ball tree over zero points" };
    }
    if (leaf_size_ == 0) {
        throw invalid_argument{ "leaf size must be at least 1" };
    }
    if (!points_.allFinite()) {
        throw invalid_argument{ "ball tree points must be finite" };
    }
    indices_.resize(size());
    std::iota(indices_.begin(), indices_.end(), std::size_t{ 0 });
    nodes_.reserve(2 * size() / leaf_size_ + 1);
    build(0, size());
}

int BallTree::build(std::size_t begin, std::size_t end) {
    const auto id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const auto count = static_cast<double>(end - begin);

    Vector centroid = Vector::Zero(points_.cols());
    for (std::size_t i = begin; i < end; ++i) {
        centroid += points_.row(static_cast<Eigen::Index>(indices_[i])).transpose();
    }
    centroid /= count;
    double radius = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        radius = std::max(radius, (points_.row(static_cast<Eigen::Index>(indices_[i])).transpose() - centroid).norm());
    }
    nodes_[static_cast<std::size_t>(id)].centroid = std::move(centroid);
    nodes_[static_cast<std::size_t>(id)].radius = radius;
    nodes_[static_cast<std::size_t>(id)].begin = begin;
    nodes_[static_cast<std::size_t>(id)].end = end;

    if (end - begin <= leaf_size_) {
        return id;
    }

    Eigen::Index split_dim = 0;
    double best_spread = -1.0;
    for (Eigen::Index j = 0; j < points_.cols(); ++j) {
        double lo = points_(static_cast<Eigen::Index>(indices_[begin]), j);
        double hi = lo;
        for (std::size_t i = begin + 1; i < end; ++i) {
            const double v = points_(static_cast<Eigen::Index>(indices_[i]), j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            split_dim = j;
        }
    }
    std::sort(indices_.begin() + static_cast<std::ptrdiff_t>(begin), indices_.begin() + static_cast<std::ptrdiff_t>(end),
              [&](std::size_t a, std::size_t b) {
                  const double va = points_(static_cast<Eigen::Index>(a), split_dim);
                  const double vb = points_(static_cast<Eigen::Index>(b), split_dim);
                  return va < vb || (va == vb && a < b);
              });
    const std::size_t mid = begin + (end - begin) / 2;
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
}

namespace {

struct Candidate {
    double dist2;
    std::size_t index;
};

// max-heap on (dist2, index): top is the current worst of the k best
struct WorseFirst {
    bool operator()(const Candidate &a, const Candidate &b) const noexcept {
        return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
    }
};

}  // namespace

std::vector<Neighbor> BallTree::knn(std::size_t query_index, std::size_t k) const {
    if (query_index >= size()) {
        throw invalid_argument{ fmt::format("query index {} out of range for {} points", query_index, size()) };
    }
    return knn_point(points_.row(static_cast<Eigen::Index>(query_index)), k, query_index);
}

std::vector<Neighbor> BallTree::knn_point(const Eigen::Ref<const RowVector> &query, std::size_t k,
                                          std::optional<std::size_t> exclude) const {
    if (query.size() != points_.cols()) {
        throw invalid_argument{ fmt::format("query has {} dimensions, tree has {}", query.size(), points_.cols()) };
    }
    const std::size_t available = size() - (exclude && *exclude < size() ? 1 : 0);
    if (k < 1 || k > available) {
        throw invalid_argument{ fmt::format("k = {} out of range [1, {}]", k, available) };
    }

    std::priority_queue<Candidate, std::vector<Candidate>, WorseFirst> best;
    const Vector q = query.transpose();

    // iterative depth-first search, nearer child first
    std::vector<std::pair<int, double>> stack;
    const auto lower_bound = [&](int node) {
        const Node &n = nodes_[static_cast<std::size_t>(node)];
        const double to_centroid = (q - n.centroid).norm();
        // loosened by a relative epsilon: rounding must never prune an exact tie
        return std::max(0.0, to_centroid - n.radius - 1e-12 * (to_centroid + n.radius));
    };
    stack.emplace_back(0, lower_bound(0));
    while (!stack.empty()) {
        const auto [node_id, bound] = stack.back();
        stack.pop_back();
        if (best.size() == k) {
            if (bound > std::sqrt(best.top().dist2)) {
                continue;
            }
        }
        const Node &node = nodes_[static_cast<std::size_t>(node_id)];
        if (node.is_leaf()) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t idx = indices_[i];
                if (exclude && idx == *exclude) {
                    continue;
                }
                const double d2 = (points_.row(static_cast<Eigen::Index>(idx)).transpose() - q).squaredNorm();
                const Candidate c{ d2, idx };
                if (best.size() < k) {
                    best.push(c);
                } else if (WorseFirst{}(c, best.top())) {
                    best.pop();
                    best.push(c);
                }
            }
            continue;
        }
        const double bl = lower_bound(node.left);
        const double br = lower_bound(node.right);
        // push the farther child first so the nearer is explored first
        if (bl <= br) {
            stack.emplace_back(node.right, br);
            stack.emplace_back(node.left, bl);
        } else {
            stack.emplace_back(node.left, bl);
            stack.emplace_back(node.right, br);
        }
    }

    std::vector<Neighbor> out(best.size());
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = Neighbor{ best.top().index, std::sqrt(best.top().dist2) };
        best.pop();
    }
    return out;
}

namespace {

void check_k(const BallTree &tree, std::size_t k) {
    if (k < 1 || k + 1 > tree.size()) {
        throw invalid_argument{ fmt::format("k = {} out of range [1, {}]", k, tree.size() - 1) };
    }
}

}  // namespace

std::vector<std::vector<Neighbor>> all_knn(const BallTree &tree, std::size_t k) {
    check_k(tree, k);
    std::vector<std::vector<Neighbor>> out(tree.size());
    const auto n = static_cast<std::ptrdiff_t>(tree.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = tree.knn(static_cast<std::size_t>(i), k);
    }
    return out;
}

namespace serial {

std::vector<std::vector<Neighbor>> all_knn(const BallTree &tree, std::size_t k) {
    check_k(tree, k);
    std::vector<std::vector<Neighbor>> out(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) {
        out[i] = tree.knn(i, k);
    }
    return out;
}

}  // namespace serial

}  // namespace imb
