#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sparsebench/iterative/preconditioner.hpp"

namespace sparsebench {

/// Exit when ||b - A x||_2 / ||b||_2 <= epsilon.
struct StoppingCriterion {
  double epsilon = 1e-8;
  Index max_iter = 10000;

  void validate() const {
    detail::require(epsilon > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");
    detail::require(max_iter >= 1, ErrorCode::invalid_argument, "max_iter must be at least 1");
  }
};

struct IterationLog {
  Index iterations = 0;
  /// Relative residual before the first iteration and after each one.
  std::vector<double> residual_history;
  std::uint64_t solve_flops = 0;
  double precond_setup_time = 0.0;
  double solve_time = 0.0;
  bool converged = false;
  /// ||b - A x|| / ||b|| recomputed with a fresh spmv for the returned x.
  double final_relative_residual = 0.0;
  /// Number of explicit residual recomputations (periodic and at exit).
  Index true_residual_checks = 0;
  /// BiCGSTAB only: the last iteration stopped after its first half-step.
  bool half_step_exit = false;
  /// BiCGSTAB only: iterations that ended after the first half-step, the
  /// exit included, whether or not the true residual then confirmed it.
  Index half_steps = 0;
  /// BiCGSTAB only: passes abandoned because rho, or (r_hat, v), fell below
  /// the breakdown tolerance. Neither counts as an iteration.
  Index rho_breakdowns = 0;
  Index rv_breakdowns = 0;
};

struct IterativeResult {
  DenseVector x;
  IterationLog log;
};

/// Solver stopped without meeting the criterion. Carries the iterate with the
/// smallest recomputed residual seen and the log up to that point.
class SolveFailure : public Error {
public:
  SolveFailure(ErrorCode code, const std::string& message, DenseVector best, IterationLog log)
      : Error(code, message), best_(std::move(best)), log_(std::move(log)) {}

  const DenseVector& best_iterate() const noexcept { return best_; }
  const IterationLog& log() const noexcept { return log_; }

private:
  DenseVector best_;
  IterationLog log_;
};

struct KrylovOptions {
  double breakdown_tol = 1e-30;
  /// Residual replacement period for BiCGSTAB.
  Index residual_refresh = 50;
};

namespace detail {

/// r = b - A x, counted as one spmv plus one vector update.
inline void residual_into(const CsrMatrix& a, std::span<const double> b, std::span<const double> x,
                          std::span<double> r, OpStats* stats) {
  spmv_into(a, x, r, stats);
  for (Index i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  count(stats, 2 * r.size());
}

inline void check_system(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m,
                         std::span<const double> x0) {
  require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  require(b.size() == a.n_rows() && x0.size() == a.n_rows() && m.size() == a.n_rows(),
          ErrorCode::dimension_mismatch, "system dimensions do not match");
  require(all_finite(b) && all_finite(x0), ErrorCode::non_finite, "non-finite entries in b or x0");
}

/// Tracks the iterate with the smallest recomputed residual.
struct BestIterate {
  DenseVector x;
  double residual = std::numeric_limits<double>::infinity();

  void offer(std::span<const double> candidate, double rel) {
    if (rel < residual) {
      residual = rel;
      x.assign(candidate.begin(), candidate.end());
    }
  }
};

}  // namespace detail

/// Right-preconditioned BiCGSTAB: iterates on A M^-1 y = b and keeps
/// x = M^-1 y, so the monitored residual is that of the original system.
/// Convergence is only declared after a fresh b - A x meets the criterion;
/// otherwise the recurrence restarts from the true residual.
inline IterativeResult bicgstab(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m,
                                const StoppingCriterion& stop, std::optional<DenseVector> x0 = std::nullopt,
                                const KrylovOptions& opt = {}) {
  stop.validate();
  const Index n = a.n_rows();
  DenseVector x = x0 ? std::move(*x0) : DenseVector(n, 0.0);
  detail::check_system(a, b, m, x);

  const auto start = std::chrono::steady_clock::now();
  OpStats stats;
  IterationLog log;
  log.precond_setup_time = m.setup_seconds();
  auto finish = [&](bool converged, double rel) {
    log.converged = converged;
    log.final_relative_residual = rel;
    log.solve_flops = stats.flops;
    log.solve_time = detail::seconds_since(start);
  };

  const double b_norm = norm2(b, &stats);
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    log.residual_history.push_back(0.0);
    finish(true, 0.0);
    return {std::move(x), std::move(log)};
  }

  DenseVector r(n), r_hat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), p_hat(n), s_hat(n);
  detail::residual_into(a, b, x, r, &stats);
  double rel = norm2(r, &stats) / b_norm;
  log.residual_history.push_back(rel);
  detail::BestIterate best;
  best.offer(x, rel);
  if (rel <= stop.epsilon) {
    finish(true, rel);
    return {std::move(x), std::move(log)};
  }

  double rho_prev = 1.0, alpha = 1.0, omega = 1.0;
  bool fresh_shadow = true;
  auto restart = [&] {
    r_hat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    rho_prev = alpha = omega = 1.0;
    fresh_shadow = true;
  };
  restart();

  // Recomputes the true residual; returns true on convergence.
  auto true_check = [&]() {
    detail::residual_into(a, b, x, r, &stats);
    rel = norm2(r, &stats) / b_norm;
    ++log.true_residual_checks;
    best.offer(x, rel);
    return rel <= stop.epsilon;
  };
  auto breakdown = [&](const char* what) {
    if (true_check()) return true;
    if (fresh_shadow) {
      finish(false, rel);
      throw SolveFailure(ErrorCode::breakdown, what, best.x, log);
    }
    restart();
    return false;
  };

  for (Index pass = 0; pass < stop.max_iter; ++pass) {
    const double rho = dot(r_hat, r, &stats);
    if (std::abs(rho) < opt.breakdown_tol) {
      ++log.rho_breakdowns;
      if (breakdown("rho below breakdown tolerance")) {
        finish(true, rel);
        return {std::move(x), std::move(log)};
      }
      continue;
    }
    const double beta = (rho / rho_prev) * (alpha / omega);
    axpy_inplace(-omega, v, p, &stats);
    for (Index i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    count(&stats, 2 * n);
    m.apply(p, p_hat, &stats);
    spmv_into(a, p_hat, v, &stats);
    const double rv = dot(r_hat, v, &stats);
    if (std::abs(rv) < opt.breakdown_tol) {
      ++log.rv_breakdowns;
      if (breakdown("(r_hat, v) below breakdown tolerance")) {
        finish(true, rel);
        return {std::move(x), std::move(log)};
      }
      continue;
    }
    alpha = rho / rv;
    for (Index i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    count(&stats, 2 * n);
    const double s_rel = norm2(s, &stats) / b_norm;
    if (s_rel <= stop.epsilon) {
      axpy_inplace(alpha, p_hat, x, &stats);
      ++log.iterations;
      ++log.half_steps;
      log.half_step_exit = true;
      log.residual_history.push_back(s_rel);
      if (true_check()) {
        finish(true, rel);
        return {std::move(x), std::move(log)};
      }
      log.half_step_exit = false;
      restart();
      continue;
    }
    m.apply(s, s_hat, &stats);
    spmv_into(a, s_hat, t, &stats);
    const double tt = dot(t, t, &stats);
    const double ts = dot(t, s, &stats);
    omega = tt > 0.0 ? ts / tt : 0.0;
    axpy_inplace(alpha, p_hat, x, &stats);
    axpy_inplace(omega, s_hat, x, &stats);
    for (Index i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    count(&stats, 2 * n);
    const double r_rel = norm2(r, &stats) / b_norm;
    ++log.iterations;
    log.residual_history.push_back(r_rel);
    rho_prev = rho;
    fresh_shadow = false;

    if (r_rel <= stop.epsilon) {
      if (true_check()) {
        finish(true, rel);
        return {std::move(x), std::move(log)};
      }
      restart();
    } else if (std::abs(omega) < opt.breakdown_tol) {
      if (breakdown("omega below breakdown tolerance")) {
        finish(true, rel);
        return {std::move(x), std::move(log)};
      }
    } else if (opt.residual_refresh > 0 && log.iterations % opt.residual_refresh == 0) {
      if (true_check()) {
        finish(true, rel);
        return {std::move(x), std::move(log)};
      }
    }
  }

  if (true_check()) {
    finish(true, rel);
    return {std::move(x), std::move(log)};
  }
  finish(false, best.residual);
  throw SolveFailure(ErrorCode::not_converged,
                     "no convergence after " + std::to_string(stop.max_iter) + " iterations", best.x, log);
}

inline IterativeResult bicgstab(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m,
                                const StoppingCriterion& stop, const KrylovOptions& opt) {
  return bicgstab(a, b, m, stop, std::nullopt, opt);
}

/// Restarted right-preconditioned GMRES(restart) with modified Gram-Schmidt
/// and Givens rotations. Counts one iteration per Arnoldi step.
inline IterativeResult gmres(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m,
                             const StoppingCriterion& stop, Index restart,
                             std::optional<DenseVector> x0 = std::nullopt) {
  stop.validate();
  detail::require(restart >= 1, ErrorCode::invalid_argument, "restart length must be at least 1");
  const Index n = a.n_rows();
  DenseVector x = x0 ? std::move(*x0) : DenseVector(n, 0.0);
  detail::check_system(a, b, m, x);

  const auto start = std::chrono::steady_clock::now();
  OpStats stats;
  IterationLog log;
  log.precond_setup_time = m.setup_seconds();
  auto finish = [&](bool converged, double rel) {
    log.converged = converged;
    log.final_relative_residual = rel;
    log.solve_flops = stats.flops;
    log.solve_time = detail::seconds_since(start);
  };

  const double b_norm = norm2(b, &stats);
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    log.residual_history.push_back(0.0);
    finish(true, 0.0);
    return {std::move(x), std::move(log)};
  }

  DenseVector r(n), z(n), w(n), update(n);
  detail::residual_into(a, b, x, r, &stats);
  double beta = norm2(r, &stats);
  double rel = beta / b_norm;
  log.residual_history.push_back(rel);
  detail::BestIterate best;
  best.offer(x, rel);
  if (rel <= stop.epsilon) {
    finish(true, rel);
    return {std::move(x), std::move(log)};
  }

  const Index m_dim = restart;
  std::vector<DenseVector> basis(m_dim + 1, DenseVector(n));
  std::vector<std::vector<double>> h(m_dim + 1, std::vector<double>(m_dim, 0.0));
  std::vector<double> cs(m_dim), sn(m_dim), g(m_dim + 1), y(m_dim);

  while (log.iterations < stop.max_iter) {
    for (Index i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
    count(&stats, n);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    Index steps = 0;
    for (Index j = 0; j < m_dim && log.iterations < stop.max_iter; ++j) {
      m.apply(basis[j], z, &stats);
      spmv_into(a, z, w, &stats);
      const double w_norm0 = norm2(w, &stats);
      for (Index i = 0; i <= j; ++i) {
        h[i][j] = dot(w, basis[i], &stats);
        axpy_inplace(-h[i][j], basis[i], w, &stats);
      }
      const double h_next = norm2(w, &stats);
      for (Index i = 0; i < j; ++i) {
        const double t0 = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t0;
      }
      const double denom = std::hypot(h[j][j], h_next);
      cs[j] = denom > 0.0 ? h[j][j] / denom : 1.0;
      sn[j] = denom > 0.0 ? h_next / denom : 0.0;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      count(&stats, 6 * (j + 1));

      ++log.iterations;
      steps = j + 1;
      const double est = std::abs(g[j + 1]) / b_norm;
      log.residual_history.push_back(est);
      const bool happy = h_next <= 1e-14 * w_norm0;
      if (happy || est <= stop.epsilon) break;
      for (Index i = 0; i < n; ++i) basis[j + 1][i] = w[i] / h_next;
      count(&stats, n);
    }

    // x += M^-1 (V y), y from the triangular least-squares system.
    for (Index i = steps; i-- > 0;) {
      double s = g[i];
      for (Index k = i + 1; k < steps; ++k) s -= h[i][k] * y[k];
      y[i] = h[i][i] != 0.0 ? s / h[i][i] : 0.0;
    }
    std::fill(update.begin(), update.end(), 0.0);
    for (Index i = 0; i < steps; ++i) axpy_inplace(y[i], basis[i], update, &stats);
    m.apply(update, z, &stats);
    axpy_inplace(1.0, z, x, &stats);

    detail::residual_into(a, b, x, r, &stats);
    beta = norm2(r, &stats);
    rel = beta / b_norm;
    ++log.true_residual_checks;
    best.offer(x, rel);
    if (rel <= stop.epsilon) {
      finish(true, rel);
      return {std::move(x), std::move(log)};
    }
    if (beta == 0.0 || !std::isfinite(beta)) break;
  }
  finish(false, best.residual);
  throw SolveFailure(ErrorCode::not_converged,
                     "no convergence after " + std::to_string(log.iterations) + " iterations", best.x, log);
}

}  // namespace sparsebench
