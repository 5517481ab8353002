#pragma once

#include "imb/data.hpp"
#include "imb/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace imb::test {

inline std::filesystem::path fixture(const std::string &name) { return std::filesystem::path{ IMB_FIXTURE_DIR } / name; }

/// Directory with pima.dat / glass0.dat, from the build option or the IMB_KEEL_DIR environment variable.
inline std::optional<std::filesystem::path> keel_dir() {
    std::string dir = IMB_KEEL_DIR_DEFAULT;
    if (const char *env = std::getenv("IMB_KEEL_DIR"); env != nullptr && *env != '\0') {
        dir = env;
    }
    if (dir.empty() || !std::filesystem::exists(std::filesystem::path{ dir } / "pima.dat") ||
        !std::filesystem::exists(std::filesystem::path{ dir } / "glass0.dat")) {
        return std::nullopt;
    }
    return std::filesystem::path{ dir };
}

inline std::filesystem::path scratch_dir(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / ("imb_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Matrix gaussian_matrix(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols, double mean = 0.0, double sd = 1.0) {
    std::normal_distribution<double> g{ mean, sd };
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = g(rng);
        }
    }
    return m;
}

/// Majority rows first (label 0), then minority rows (label 1).
inline LabeledDataset two_class(const Matrix &majority, const Matrix &minority) {
    Matrix x(majority.rows() + minority.rows(), majority.cols());
    x << majority, minority;
    std::vector<int> y(static_cast<std::size_t>(x.rows()), 0);
    std::fill(y.begin() + majority.rows(), y.end(), 1);
    return LabeledDataset{ std::move(x), std::move(y), { "negative", "positive" }, 1 };
}

inline LabeledDataset random_dataset(std::mt19937_64 &rng, std::size_t majority, std::size_t minority, std::size_t dims,
                                     double shift = 1.0) {
    const auto d = static_cast<Eigen::Index>(dims);
    Matrix maj = gaussian_matrix(rng, static_cast<Eigen::Index>(majority), d);
    Matrix min = gaussian_matrix(rng, static_cast<Eigen::Index>(minority), d, shift);
    return two_class(maj, min);
}

/// Exhaustive scan: the k nearest rows to `q` other than `exclude`, by (distance, index).
inline std::vector<Neighbor> brute_knn(const Matrix &points, const RowVector &q, std::size_t k,
                                       std::optional<std::size_t> exclude = std::nullopt) {
    std::vector<Neighbor> all;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (exclude && *exclude == idx) {
            continue;
        }
        all.push_back({ idx, (points.row(i) - q).norm() });
    }
    std::sort(all.begin(), all.end(), [](const Neighbor &a, const Neighbor &b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

/// Largest coordinate deviation of `p` from the point a + alpha (b - a).
inline double segment_error(const RowVector &p, const RowVector &a, const RowVector &b, double alpha) {
    return (p - (a + alpha * (b - a))).cwiseAbs().maxCoeff();
}

inline bool rows_equal_bitwise(const Matrix &a, Eigen::Index ra, const Matrix &b, Eigen::Index rb) {
    if (a.cols() != b.cols()) {
        return false;
    }
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double x = a(ra, j);
        const double y = b(rb, j);
        if (std::memcmp(&x, &y, sizeof(double)) != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace imb::test
