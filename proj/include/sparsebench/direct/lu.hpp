#pragma once

#include <chrono>
#include <cmath>

#include "sparsebench/direct/symbolic.hpp"

namespace sparsebench {

struct FactorStats {
  /// Stored entries of L (unit diagonal included) plus U.
  Index fill_nnz = 0;
  /// fill_nnz as a percentage of n^2.
  double fill_in_density = 0.0;
  std::uint64_t factor_flops = 0;
  double ordering_s = 0.0;
  double symbolic_s = 0.0;
  double numeric_s = 0.0;
  double solve_s = 0.0;
};

/// P A Q^T = L U with L unit lower triangular (diagonal stored last in each
/// row) and U upper triangular (diagonal stored first in each row).
struct LuFactors {
  CsrMatrix L;
  CsrMatrix U;
  Permutation row_perm;
  Permutation col_perm;
  FactorStats stats;

  Index size() const noexcept { return U.n_rows(); }
  /// Flops of one forward plus backward substitution.
  std::uint64_t solve_flops() const noexcept {
    const Index n = size();
    return 2 * (L.nnz() - n) + 2 * (U.nnz() - n) + n;
  }
};

namespace detail {
inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}
}  // namespace detail

/// Up-looking row LU without pivoting, restricted to the symbolic pattern.
/// A multiply-add counts as 2 flops, a division as 1.
inline LuFactors numeric_factorize(const CsrMatrix& a, const SymbolicFactorization& sym) {
  const Index n = sym.size();
  detail::require(a.is_square() && a.n_rows() == n, ErrorCode::dimension_mismatch,
                  "symbolic factorization does not match matrix");
  const auto start = std::chrono::steady_clock::now();
  const Permutation& perm = sym.ordering.col_perm;
  const CsrMatrix ap = permute(a, perm, perm);
  const double pivot_tol = 1e-14 * a.max_abs();

  std::vector<Index> l_ptr(n + 1, 0), l_col;
  std::vector<double> l_val;
  l_col.reserve(sym.lower.nnz() + n);
  l_val.reserve(sym.lower.nnz() + n);
  std::vector<double> u_val(sym.upper.nnz(), 0.0);

  std::vector<double> work(n, 0.0);
  std::uint64_t flops = 0;
  for (Index i = 0; i < n; ++i) {
    auto cols = ap.row_cols(i);
    auto vals = ap.row_values(i);
    for (Index k = 0; k < cols.size(); ++k) work[cols[k]] = vals[k];

    for (Index k : sym.lower.row(i)) {
      const Index diag_pos = sym.upper.row_ptr[k];
      const double lik = work[k] / u_val[diag_pos];
      ++flops;
      work[k] = 0.0;
      for (Index p = diag_pos + 1; p < sym.upper.row_ptr[k + 1]; ++p)
        work[sym.upper.col_idx[p]] -= lik * u_val[p];
      flops += 2 * (sym.upper.row_ptr[k + 1] - diag_pos - 1);
      l_col.push_back(k);
      l_val.push_back(lik);
    }
    l_col.push_back(i);
    l_val.push_back(1.0);
    l_ptr[i + 1] = l_col.size();

    for (Index p = sym.upper.row_ptr[i]; p < sym.upper.row_ptr[i + 1]; ++p) {
      const Index j = sym.upper.col_idx[p];
      u_val[p] = work[j];
      work[j] = 0.0;
    }
    if (!(std::abs(u_val[sym.upper.row_ptr[i]]) >= pivot_tol) || pivot_tol == 0.0)
      throw IndexedError(ErrorCode::zero_pivot, i, "pivot below 1e-14 * max|A|");
  }

  LuFactors f;
  f.L = CsrMatrix(n, n, std::move(l_ptr), std::move(l_col), std::move(l_val));
  // Upper rows are stored diagonal first, then strictly increasing.
  f.U = CsrMatrix(n, n, sym.upper.row_ptr, sym.upper.col_idx, std::move(u_val));
  f.row_perm = perm;
  f.col_perm = perm;
  f.stats.fill_nnz = f.L.nnz() + f.U.nnz();
  f.stats.fill_in_density = nonzero_density(f.stats.fill_nnz, n, n);
  f.stats.factor_flops = flops;
  f.stats.numeric_s = detail::seconds_since(start);
  return f;
}

/// Solves A x = b into `x` with the permuted triangular factors.
inline void lu_solve_into(const LuFactors& f, std::span<const double> b, std::span<double> x,
                          OpStats* stats = nullptr) {
  const Index n = f.size();
  detail::require(b.size() == n && x.size() == n, ErrorCode::dimension_mismatch,
                  "rhs length does not match factors");
  std::vector<double> y(n);
  for (Index i = 0; i < n; ++i) y[i] = b[f.row_perm(i)];

  const auto& lp = f.L.row_ptr();
  const auto& lc = f.L.col_idx();
  const auto& lv = f.L.values();
  for (Index i = 0; i < n; ++i) {
    double s = y[i];
    for (Index p = lp[i]; p + 1 < lp[i + 1]; ++p) s -= lv[p] * y[lc[p]];
    y[i] = s;
  }
  const auto& up = f.U.row_ptr();
  const auto& uc = f.U.col_idx();
  const auto& uv = f.U.values();
  for (Index i = n; i-- > 0;) {
    double s = y[i];
    for (Index p = up[i] + 1; p < up[i + 1]; ++p) s -= uv[p] * y[uc[p]];
    y[i] = s / uv[up[i]];
  }
  for (Index i = 0; i < n; ++i) x[f.col_perm(i)] = y[i];
  count(stats, f.solve_flops());
}

inline DenseVector lu_solve(const LuFactors& f, std::span<const double> b, OpStats* stats = nullptr) {
  DenseVector x(b.size());
  lu_solve_into(f, b, x, stats);
  return x;
}

/// Column k of the result is lu_solve(f, column k of B).
inline DenseBlock lu_solve_block(const LuFactors& f, const DenseBlock& b, OpStats* stats = nullptr) {
  detail::require(b.n_rows() == f.size(), ErrorCode::dimension_mismatch,
                  "rhs block rows do not match factors");
  DenseBlock x(b.n_rows(), b.n_cols());
  for (Index k = 0; k < b.n_cols(); ++k) lu_solve_into(f, b.column(k), x.column(k), stats);
  return x;
}

/// Ordering, symbolic and numeric phases in sequence, each timed.
inline LuFactors factorize(const CsrMatrix& a, OrderingMethod method) {
  auto t0 = std::chrono::steady_clock::now();
  EliminationOrdering ord = compute_ordering(a, method);
  const double ordering_s = detail::seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  SymbolicFactorization sym = symbolic_factorize(a, ord);
  const double symbolic_s = detail::seconds_since(t0);
  LuFactors f = numeric_factorize(a, sym);
  f.stats.ordering_s = ordering_s;
  f.stats.symbolic_s = symbolic_s;
  return f;
}

}  // namespace sparsebench
