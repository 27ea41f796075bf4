#include "levyif/linear_solve.hpp"

#include <cmath>
#include <utility>

#include "levyif/errors.hpp"

namespace levyif {

Mat Mat::from_rows(const std::vector<Vec>& rows) {
  Mat m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_)
      throw ParameterError("Mat::from_rows: ragged rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Mat::max_abs() const noexcept {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

std::optional<Vec> solve_linear(Mat a, Vec b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw ParameterError("solve_linear: dimension mismatch");
  if (n == 0) return Vec{};

  const double pivot_floor = kSingularityThreshold * std::max(a.max_abs(), 1e-300);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) <= pivot_floor) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = col; j < n; ++j)
        std::swap(a(pivot, j), a(col, j));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }

  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace levyif
