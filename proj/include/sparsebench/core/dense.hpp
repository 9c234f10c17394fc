#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sparsebench/core/error.hpp"

namespace sparsebench {

using Index = std::uint64_t;
using DenseVector = std::vector<double>;

/// Per-call statistics accumulator. Kernels add to it when one is passed;
/// passing nullptr disables counting.
struct OpStats {
  std::uint64_t flops = 0;

  void add(std::uint64_t f) noexcept { flops += f; }
};

inline void count(OpStats* stats, std::uint64_t flops) {
  if (stats != nullptr) stats->add(flops);
}

/// Column-major n_rows x n_cols block of right-hand sides or solutions.
class DenseBlock {
public:
  DenseBlock() = default;
  DenseBlock(Index n_rows, Index n_cols, double fill = 0.0)
      : n_rows_(n_rows), n_cols_(n_cols), values_(n_rows * n_cols, fill) {}

  static DenseBlock from_columns(const std::vector<DenseVector>& columns) {
    if (columns.empty()) return {};
    DenseBlock block(columns.front().size(), columns.size());
    for (Index k = 0; k < columns.size(); ++k) block.set_column(k, columns[k]);
    return block;
  }

  Index n_rows() const noexcept { return n_rows_; }
  Index n_cols() const noexcept { return n_cols_; }

  double& operator()(Index i, Index k) { return values_[k * n_rows_ + i]; }
  double operator()(Index i, Index k) const { return values_[k * n_rows_ + i]; }

  std::span<double> column(Index k) {
    detail::require(k < n_cols_, ErrorCode::index_out_of_range, "column index out of range");
    return {values_.data() + k * n_rows_, n_rows_};
  }
  std::span<const double> column(Index k) const {
    detail::require(k < n_cols_, ErrorCode::index_out_of_range, "column index out of range");
    return {values_.data() + k * n_rows_, n_rows_};
  }

  DenseVector column_vector(Index k) const {
    auto c = column(k);
    return {c.begin(), c.end()};
  }

  void set_column(Index k, std::span<const double> v) {
    detail::require(v.size() == n_rows_, ErrorCode::dimension_mismatch, "column length mismatch");
    auto c = column(k);
    std::copy(v.begin(), v.end(), c.begin());
  }

  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const DenseBlock&, const DenseBlock&) = default;

private:
  Index n_rows_ = 0;
  Index n_cols_ = 0;
  std::vector<double> values_;
};

inline void require_same_length(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), ErrorCode::dimension_mismatch, "vector lengths differ");
}

inline bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

inline double dot(std::span<const double> x, std::span<const double> y, OpStats* stats = nullptr) {
  require_same_length(x, y);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  count(stats, 2 * x.size());
  return sum;
}

inline double norm2(std::span<const double> x, OpStats* stats = nullptr) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  count(stats, 2 * x.size());
  return std::sqrt(sum);
}

/// y <- a*x + y
inline void axpy_inplace(double a, std::span<const double> x, std::span<double> y,
                         OpStats* stats = nullptr) {
  detail::require(x.size() == y.size(), ErrorCode::dimension_mismatch, "vector lengths differ");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
  count(stats, 2 * x.size());
}

inline DenseVector axpy(double a, std::span<const double> x, std::span<const double> y,
                        OpStats* stats = nullptr) {
  DenseVector out(y.begin(), y.end());
  axpy_inplace(a, x, out, stats);
  return out;
}

}  // namespace sparsebench
