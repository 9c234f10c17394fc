#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>
#include <vector>

#include "sparsebench/core/dense.hpp"
#include "sparsebench/core/permutation.hpp"

namespace sparsebench {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Assembly staging area. Duplicate (row, col) pairs are allowed and are
/// summed when converted to CSR.
struct CooTriplets {
  Index n_rows = 0;
  Index n_cols = 0;
  std::vector<Triplet> entries;

  void add(Index r, Index c, double v) { entries.push_back({r, c, v}); }
};

/// Compressed sparse row matrix. Within a row, column indices are strictly
/// increasing.
class CsrMatrix {
public:
  CsrMatrix() : row_ptr_(1, 0) {}

  /// Takes ownership of raw arrays and validates every structural invariant.
  CsrMatrix(Index n_rows, Index n_cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
            std::vector<double> values)
      : n_rows_(n_rows),
        n_cols_(n_cols),
        row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)),
        values_(std::move(values)) {
    validate();
  }

  static CsrMatrix zero(Index n_rows, Index n_cols) {
    return CsrMatrix(n_rows, n_cols, std::vector<Index>(n_rows + 1, 0), {}, {});
  }

  static CsrMatrix identity(Index n) {
    std::vector<Index> ptr(n + 1), col(n);
    for (Index i = 0; i < n; ++i) {
      ptr[i] = i;
      col[i] = i;
    }
    ptr[n] = n;
    return CsrMatrix(n, n, std::move(ptr), std::move(col), std::vector<double>(n, 1.0));
  }

  Index n_rows() const noexcept { return n_rows_; }
  Index n_cols() const noexcept { return n_cols_; }
  Index nnz() const noexcept { return col_idx_.size(); }
  bool is_square() const noexcept { return n_rows_ == n_cols_; }

  const std::vector<Index>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<Index>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(Index i) const {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  /// Position of (i, j) in the value array, if stored.
  std::optional<Index> find(Index i, Index j) const {
    auto cols = row_cols(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return std::nullopt;
    return row_ptr_[i] + static_cast<Index>(it - cols.begin());
  }

  /// Entry (i, j); zero when not stored.
  double at(Index i, Index j) const {
    detail::require(i < n_rows_ && j < n_cols_, ErrorCode::index_out_of_range,
                    "matrix entry index out of range");
    auto pos = find(i, j);
    return pos ? values_[*pos] : 0.0;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
  }

  /// Throws if any structural invariant is violated.
  void validate() const {
    using detail::require;
    require(row_ptr_.size() == n_rows_ + 1, ErrorCode::invalid_argument,
            "row_ptr length must be n_rows + 1");
    require(row_ptr_.front() == 0, ErrorCode::invalid_argument, "row_ptr[0] must be 0");
    require(row_ptr_.back() == col_idx_.size(), ErrorCode::invalid_argument,
            "row_ptr[n_rows] must equal nnz");
    require(col_idx_.size() == values_.size(), ErrorCode::invalid_argument,
            "col_idx and values lengths differ");
    for (Index i = 0; i < n_rows_; ++i) {
      require(row_ptr_[i] <= row_ptr_[i + 1], ErrorCode::invalid_argument,
              "row_ptr must be non-decreasing");
      for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        require(col_idx_[k] < n_cols_, ErrorCode::index_out_of_range, "column index out of range");
        if (k > row_ptr_[i])
          require(col_idx_[k - 1] < col_idx_[k], ErrorCode::invalid_argument,
                  "column indices must be strictly increasing within a row");
      }
    }
  }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
  Index n_rows_ = 0;
  Index n_cols_ = 0;
  std::vector<Index> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

inline CsrMatrix coo_to_csr(const CooTriplets& t) {
  for (const auto& e : t.entries)
    if (e.row >= t.n_rows || e.col >= t.n_cols)
      detail::fail(ErrorCode::index_out_of_range,
                   "triplet (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                       ") outside " + std::to_string(t.n_rows) + "x" + std::to_string(t.n_cols));

  // Counting sort by row keeps insertion order within a row, so duplicate
  // summation order is deterministic.
  std::vector<Index> counts(t.n_rows + 1, 0);
  for (const auto& e : t.entries) ++counts[e.row + 1];
  for (Index i = 0; i < t.n_rows; ++i) counts[i + 1] += counts[i];
  std::vector<std::pair<Index, double>> staged(t.entries.size());
  {
    auto next = counts;
    for (const auto& e : t.entries) staged[next[e.row]++] = {e.col, e.value};
  }

  std::vector<Index> row_ptr(t.n_rows + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(staged.size());
  values.reserve(staged.size());
  for (Index i = 0; i < t.n_rows; ++i) {
    auto first = staged.begin() + static_cast<std::ptrdiff_t>(counts[i]);
    auto last = staged.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (col_idx.size() > row_ptr[i] && col_idx.back() == it->first)
        values.back() += it->second;
      else {
        col_idx.push_back(it->first);
        values.push_back(it->second);
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return CsrMatrix(t.n_rows, t.n_cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

inline CooTriplets csr_to_coo(const CsrMatrix& a) {
  CooTriplets t{a.n_rows(), a.n_cols(), {}};
  t.entries.reserve(a.nnz());
  for (Index i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (Index k = 0; k < cols.size(); ++k) t.entries.push_back({i, cols[k], vals[k]});
  }
  return t;
}

/// y = A x. Left-to-right accumulation within each row.
inline void spmv_into(const CsrMatrix& a, std::span<const double> x, std::span<double> y,
                      OpStats* stats = nullptr) {
  detail::require(x.size() == a.n_cols() && y.size() == a.n_rows(),
                  ErrorCode::dimension_mismatch, "spmv dimension mismatch");
  const auto& ptr = a.row_ptr();
  const auto& col = a.col_idx();
  const auto& val = a.values();
  for (Index i = 0; i < a.n_rows(); ++i) {
    double sum = 0.0;
    for (Index k = ptr[i]; k < ptr[i + 1]; ++k) sum += val[k] * x[col[k]];
    y[i] = sum;
  }
  count(stats, 2 * a.nnz());
}

inline DenseVector spmv(const CsrMatrix& a, std::span<const double> x, OpStats* stats = nullptr) {
  DenseVector y(a.n_rows());
  spmv_into(a, x, y, stats);
  return y;
}

inline DenseBlock spmm(const CsrMatrix& a, const DenseBlock& b, OpStats* stats = nullptr) {
  detail::require(b.n_rows() == a.n_cols(), ErrorCode::dimension_mismatch,
                  "spmm dimension mismatch");
  DenseBlock out(a.n_rows(), b.n_cols());
  for (Index k = 0; k < b.n_cols(); ++k) spmv_into(a, b.column(k), out.column(k), stats);
  return out;
}

/// result(i, j) = A(p_row(i), p_col(j)).
inline CsrMatrix permute(const CsrMatrix& a, const Permutation& p_row, const Permutation& p_col) {
  detail::require(p_row.size() == a.n_rows() && p_col.size() == a.n_cols(),
                  ErrorCode::dimension_mismatch, "permutation size mismatch");
  const Permutation col_inv = p_col.inverse();
  std::vector<Index> row_ptr(a.n_rows() + 1, 0);
  std::vector<Index> col_idx(a.nnz());
  std::vector<double> values(a.nnz());
  std::vector<std::pair<Index, double>> row;
  for (Index i = 0; i < a.n_rows(); ++i) {
    const Index src = p_row(i);
    auto cols = a.row_cols(src);
    auto vals = a.row_values(src);
    row.clear();
    for (Index k = 0; k < cols.size(); ++k) row.emplace_back(col_inv(cols[k]), vals[k]);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Index pos = row_ptr[i];
    for (const auto& [c, v] : row) {
      col_idx[pos] = c;
      values[pos] = v;
      ++pos;
    }
    row_ptr[i + 1] = pos;
  }
  return CsrMatrix(a.n_rows(), a.n_cols(), std::move(row_ptr), std::move(col_idx),
                   std::move(values));
}

inline CsrMatrix transpose(const CsrMatrix& a) {
  std::vector<Index> row_ptr(a.n_cols() + 1, 0);
  for (Index c : a.col_idx()) ++row_ptr[c + 1];
  for (Index j = 0; j < a.n_cols(); ++j) row_ptr[j + 1] += row_ptr[j];
  std::vector<Index> col_idx(a.nnz());
  std::vector<double> values(a.nnz());
  auto next = row_ptr;
  for (Index i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (Index k = 0; k < cols.size(); ++k) {
      Index dst = next[cols[k]]++;
      col_idx[dst] = i;
      values[dst] = vals[k];
    }
  }
  return CsrMatrix(a.n_cols(), a.n_rows(), std::move(row_ptr), std::move(col_idx),
                   std::move(values));
}

/// Submatrix A[r0:r1, r0:r1].
inline CsrMatrix diagonal_block(const CsrMatrix& a, Index r0, Index r1) {
  detail::require(r0 <= r1 && r1 <= a.n_rows() && r1 <= a.n_cols(), ErrorCode::index_out_of_range,
                  "block range out of bounds");
  std::vector<Index> row_ptr(r1 - r0 + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (Index i = r0; i < r1; ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    auto lo = std::lower_bound(cols.begin(), cols.end(), r0);
    for (auto it = lo; it != cols.end() && *it < r1; ++it) {
      col_idx.push_back(*it - r0);
      values.push_back(vals[static_cast<Index>(it - cols.begin())]);
    }
    row_ptr[i - r0 + 1] = col_idx.size();
  }
  return CsrMatrix(r1 - r0, r1 - r0, std::move(row_ptr), std::move(col_idx), std::move(values));
}

/// Sparsity pattern of A + A^T without the diagonal, as sorted adjacency lists.
inline std::vector<std::vector<Index>> symmetric_adjacency(const CsrMatrix& a) {
  detail::require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  std::vector<std::vector<Index>> adj(a.n_rows());
  for (Index i = 0; i < a.n_rows(); ++i)
    for (Index j : a.row_cols(i))
      if (i != j) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

/// Percentage of stored entries relative to n_rows * n_cols.
inline double nonzero_density(Index nnz, Index n_rows, Index n_cols) {
  if (n_rows == 0 || n_cols == 0) return 0.0;
  return 100.0 * static_cast<double>(nnz) /
         (static_cast<double>(n_rows) * static_cast<double>(n_cols));
}

}  // namespace sparsebench
