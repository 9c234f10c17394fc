#pragma once

#include "sparsebench/direct/lu.hpp"
#include "sparsebench/metrics/memory.hpp"
#include "sparsebench/metrics/metrics.hpp"
#include "sparsebench/metrics/solve_report.hpp"

namespace sparsebench {

struct DirectRun {
  SolveReport report;
  DenseBlock solution;
};

/// Largest ||b_k - A x_k|| / ||b_k|| over the columns, from a fresh spmv.
inline double max_relative_residual(const CsrMatrix& a, const DenseBlock& b, const DenseBlock& x) {
  double worst = 0.0;
  DenseVector ax(a.n_rows());
  for (Index k = 0; k < b.n_cols(); ++k) {
    spmv_into(a, x.column(k), ax);
    auto bk = b.column(k);
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < ax.size(); ++i) {
      num += (bk[i] - ax[i]) * (bk[i] - ax[i]);
      den += bk[i] * bk[i];
    }
    worst = std::max(worst, den > 0.0 ? std::sqrt(num / den) : std::sqrt(num));
  }
  return worst;
}

/// Largest x_err over the columns.
inline double max_x_err(const DenseBlock& truth, const DenseBlock& x) {
  double worst = 0.0;
  for (Index k = 0; k < x.n_cols(); ++k) worst = std::max(worst, x_err(truth.column(k), x.column(k)));
  return worst;
}

/// order -> symbolic -> numeric -> triangular solves for every column of
/// `rhs`, one factorization shared by all columns.
inline DirectRun direct_pipeline(const CsrMatrix& a, const DenseBlock& rhs, OrderingMethod method,
                                 const DenseBlock* ground_truth = nullptr) {
  detail::require(rhs.n_rows() == a.n_rows(), ErrorCode::dimension_mismatch,
                  "rhs rows do not match matrix");
  DirectRun run;
  SolveReport& r = run.report;
  r.solver = "direct";
  r.ordering = to_string(method);
  r.n = a.n_rows();
  r.nnz = a.nnz();
  r.t_rhs = rhs.n_cols();

  const LuFactors f = factorize(a, method);
  const auto start = std::chrono::steady_clock::now();
  OpStats solve_stats;
  run.solution = lu_solve_block(f, rhs, &solve_stats);
  r.solve_s = detail::seconds_since(start);

  r.order_s = f.stats.ordering_s;
  r.symbolic_s = f.stats.symbolic_s;
  r.factor_s = f.stats.numeric_s;
  r.flops = f.stats.factor_flops + solve_stats.flops;
  r.fill_density = f.stats.fill_in_density;
  r.mem_bytes = memory_estimate(a) + memory_estimate(f) + 2 * memory_estimate(rhs);
  r.residual = max_relative_residual(a, rhs, run.solution);
  if (ground_truth != nullptr) r.x_err = max_x_err(*ground_truth, run.solution);
  r.converged = true;
  finalize_timing(r);
  return run;
}

}  // namespace sparsebench
