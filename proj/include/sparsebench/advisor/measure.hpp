#pragma once

#include <vector>

#include "sparsebench/advisor/crossover.hpp"
#include "sparsebench/metrics/experiment.hpp"

namespace sparsebench {

/// Total time of both solver families after t right-hand sides.
struct CrossoverLine {
  Index t = 0;
  double direct_model_s = 0.0;
  double iterative_model_s = 0.0;
  double direct_measured_s = 0.0;
  double iterative_measured_s = 0.0;
};

struct CrossoverMeasurement {
  CrossoverInput times;
  CrossoverEstimate estimate;
  std::vector<CrossoverLine> lines;
  double direct_max_x_err = 0.0;
  double iterative_max_x_err = 0.0;
  bool iterative_converged = true;
};

/// Factors once and triangular-solves each of t family columns, then builds
/// the preconditioner once and runs one Krylov solve per column. Per-rhs
/// solve times are the column means.
inline CrossoverMeasurement measure_crossover(const AssembledSystem& sys, const SolverSpec& iterative, Index t) {
  detail::require(iterative.method != SolverMethod::direct, ErrorCode::invalid_argument,
                  "crossover needs an iterative method");
  auto [rhs, truth] = rhs_with_truth(sys, t);
  CrossoverMeasurement out;

  const LuFactors f = factorize(sys.A, iterative.ordering);
  out.times.t_fact = f.stats.ordering_s + f.stats.symbolic_s + f.stats.numeric_s;
  std::vector<double> direct_solve(t), iterative_solve(t);
  DenseVector x(sys.size());
  for (Index k = 0; k < t; ++k) {
    const auto start = std::chrono::steady_clock::now();
    lu_solve_into(f, rhs.column(k), x);
    direct_solve[k] = detail::seconds_since(start);
    out.direct_max_x_err = std::max(out.direct_max_x_err, x_err(truth.column(k), x));
  }

  const Preconditioner m = build_preconditioner(sys.A, iterative.precond, iterative.blocks);
  out.times.t_pc = m.setup_seconds();
  for (Index k = 0; k < t; ++k) {
    const auto start = std::chrono::steady_clock::now();
    DenseVector xi;
    try {
      xi = iterative.method == SolverMethod::gmres
               ? gmres(sys.A, rhs.column(k), m, iterative.stop, iterative.restart).x
               : bicgstab(sys.A, rhs.column(k), m, iterative.stop).x;
    } catch (const SolveFailure& e) {
      xi = e.best_iterate();
      out.iterative_converged = false;
    }
    iterative_solve[k] = detail::seconds_since(start);
    out.iterative_max_x_err = std::max(out.iterative_max_x_err, x_err(truth.column(k), xi));
  }

  double direct_sum = 0.0, iterative_sum = 0.0;
  for (Index k = 0; k < t; ++k) {
    direct_sum += direct_solve[k];
    iterative_sum += iterative_solve[k];
  }
  out.times.t_slu_solve = direct_sum / static_cast<double>(t);
  out.times.t_is_solve = iterative_sum / static_cast<double>(t);
  out.estimate = empirical_t0(out.times);

  double direct_cum = out.times.t_fact, iterative_cum = out.times.t_pc;
  for (Index k = 0; k < t; ++k) {
    direct_cum += direct_solve[k];
    iterative_cum += iterative_solve[k];
    const double tk = static_cast<double>(k + 1);
    out.lines.push_back({k + 1, direct_total_time(out.times, tk), iterative_total_time(out.times, tk),
                         direct_cum, iterative_cum});
  }
  return out;
}

}  // namespace sparsebench
