#pragma once

#include <limits>
#include <vector>

#include "sparsebench/direct/ordering.hpp"

namespace sparsebench {

/// Row-compressed index set (no values).
struct SparsityPattern {
  Index n = 0;
  std::vector<Index> row_ptr{0};
  std::vector<Index> col_idx;

  Index nnz() const noexcept { return col_idx.size(); }
  std::span<const Index> row(Index i) const {
    return {col_idx.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }
  bool contains(Index i, Index j) const {
    auto r = row(i);
    return std::binary_search(r.begin(), r.end(), j);
  }
};

/// Predicted nonzero structure of the LU factors of the permuted matrix,
/// computed on the pattern of A + A^T.
struct SymbolicFactorization {
  static constexpr Index root = std::numeric_limits<Index>::max();

  EliminationOrdering ordering;
  /// Strictly lower part of L, row by row, columns ascending.
  SparsityPattern lower;
  /// U including the diagonal, row by row, diagonal first.
  SparsityPattern upper;
  /// Elimination tree over permuted indices; `root` marks tree roots.
  std::vector<Index> parent;

  Index size() const noexcept { return parent.size(); }
  /// Entries of the combined L+U pattern (diagonal counted once).
  Index predicted_fill() const noexcept { return lower.nnz() + upper.nnz(); }
};

/// Computes the elimination tree and the row patterns of L by walking the
/// tree from each below-diagonal entry; U is the transpose of L plus the
/// diagonal. No numeric values are touched.
inline SymbolicFactorization symbolic_factorize(const CsrMatrix& a, const EliminationOrdering& ord) {
  detail::require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  detail::require(ord.col_perm.size() == a.n_rows(), ErrorCode::dimension_mismatch,
                  "ordering size mismatch");
  const Index n = a.n_rows();
  detail::require(n > 0, ErrorCode::invalid_argument, "empty system");

  const CsrMatrix ap = permute(a, ord.col_perm, ord.col_perm);
  for (Index i = 0; i < n; ++i)
    if (!ap.find(i, i)) throw IndexedError(ErrorCode::structurally_singular, i, "diagonal entry absent");

  // lower[i] = { j < i : Ap(i,j) != 0 or Ap(j,i) != 0 }
  std::vector<std::vector<Index>> lower_sym(n);
  for (Index i = 0; i < n; ++i)
    for (Index j : ap.row_cols(i)) {
      if (j < i) lower_sym[i].push_back(j);
      else if (j > i) lower_sym[j].push_back(i);
    }

  SymbolicFactorization sym;
  sym.ordering = ord;
  sym.parent.assign(n, SymbolicFactorization::root);

  // Liu's algorithm with path compression through `ancestor`.
  std::vector<Index> ancestor(n, SymbolicFactorization::root);
  for (Index i = 0; i < n; ++i)
    for (Index j : lower_sym[i]) {
      Index r = j;
      while (ancestor[r] != SymbolicFactorization::root && ancestor[r] != i) {
        const Index next = ancestor[r];
        ancestor[r] = i;
        r = next;
      }
      if (ancestor[r] == SymbolicFactorization::root) {
        ancestor[r] = i;
        sym.parent[r] = i;
      }
    }

  // Row i of L is the union of tree paths from each j in lower_sym[i] up to i.
  std::vector<Index> mark(n, SymbolicFactorization::root);
  std::vector<Index> row;
  sym.lower.n = n;
  sym.lower.row_ptr.assign(n + 1, 0);
  for (Index i = 0; i < n; ++i) {
    row.clear();
    mark[i] = i;
    for (Index j : lower_sym[i])
      for (Index k = j; k != SymbolicFactorization::root && mark[k] != i; k = sym.parent[k]) {
        mark[k] = i;
        row.push_back(k);
      }
    std::sort(row.begin(), row.end());
    sym.lower.col_idx.insert(sym.lower.col_idx.end(), row.begin(), row.end());
    sym.lower.row_ptr[i + 1] = sym.lower.col_idx.size();
  }

  // U = diag + transpose(strict L).
  sym.upper.n = n;
  sym.upper.row_ptr.assign(n + 1, 0);
  for (Index i = 0; i < n; ++i) ++sym.upper.row_ptr[i + 1];
  for (Index k : sym.lower.col_idx) ++sym.upper.row_ptr[k + 1];
  for (Index i = 0; i < n; ++i) sym.upper.row_ptr[i + 1] += sym.upper.row_ptr[i];
  sym.upper.col_idx.resize(sym.upper.row_ptr[n]);
  std::vector<Index> next(sym.upper.row_ptr.begin(), sym.upper.row_ptr.end() - 1);
  for (Index i = 0; i < n; ++i) sym.upper.col_idx[next[i]++] = i;
  for (Index i = 0; i < n; ++i)
    for (Index k : sym.lower.row(i)) sym.upper.col_idx[next[k]++] = i;
  return sym;
}

}  // namespace sparsebench
