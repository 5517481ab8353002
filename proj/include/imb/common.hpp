#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace imb {

// Row-major so that a sample is a contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Base class of every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class invalid_argument : public error {
  public:
    using error::error;
};

/// Malformed input file; carries the 1-based line number where parsing failed.
class parse_error : public error {
  public:
    parse_error(const std::string &path, std::size_t line, const std::string &what);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// The dataset is well-formed but not a binary classification problem.
class unsupported_dataset_error : public error {
  public:
    using error::error;
};

/// An input attribute is not numeric.
class unsupported_attribute_error : public error {
  public:
    using error::error;
};

/// Mixes a base seed with a list of tags into an independent stream seed (splitmix64 chain).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept;

/// FNV-1a over a string, for turning names into seed tags.
[[nodiscard]] std::uint64_t hash_tag(const std::string &text) noexcept;

}  // namespace imb
