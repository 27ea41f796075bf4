#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace levyif {

using Vec = std::vector<double>;

/// Dense row-major matrix, sized for the small systems that appear here
/// (N <= 20). Entry (i, j) of the signal mean matrix B is the mean signal
/// emitted by neuron i and received by neuron j.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Mat from_rows(const std::vector<Vec>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return a_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return a_[i * cols_ + j];
  }

  Mat transposed() const;
  double max_abs() const noexcept;

  bool operator==(const Mat&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

/// Gaussian elimination with partial pivoting. Returns nullopt when some
/// pivot falls below 1e-12 relative to the largest entry of A.
std::optional<Vec> solve_linear(Mat a, Vec b);

inline constexpr double kSingularityThreshold = 1e-12;

}  // namespace levyif
