#pragma once

#include <numeric>
#include <optional>
#include <string>

#include "sparsebench/core/dense.hpp"

namespace sparsebench {

/// Measured phase times. Solve times are per right-hand side.
struct CrossoverInput {
  double t_fact = 0.0;       // direct: ordering + symbolic + numeric factorization
  double t_slu_solve = 0.0;  // direct: one pair of triangular solves
  double t_pc = 0.0;         // iterative: preconditioner setup
  double t_is_solve = 0.0;   // iterative: one preconditioned Krylov solve

  void validate() const {
    detail::require(t_fact >= 0.0 && t_slu_solve >= 0.0 && t_pc >= 0.0 && t_is_solve >= 0.0,
                    ErrorCode::invalid_argument, "crossover times must be non-negative");
  }
};

enum class CrossoverKind { finite, iterative_always_faster, direct_always_faster };

inline std::string to_string(CrossoverKind k) {
  switch (k) {
    case CrossoverKind::finite: return "finite";
    case CrossoverKind::iterative_always_faster: return "IterativeAlwaysFaster";
    case CrossoverKind::direct_always_faster: return "DirectAlwaysFaster";
  }
  return "";
}

/// Number of right-hand sides t0 at which direct (t_fact + t t_slu_solve) and
/// iterative (t_pc + t t_is_solve) total times coincide.
struct CrossoverEstimate {
  CrossoverKind kind = CrossoverKind::finite;
  double t0 = 0.0;  // meaningful only when kind == finite
  /// For a finite t0: true when direct is cheaper for every t > t0.
  bool direct_faster_above = true;

  bool finite() const noexcept { return kind == CrossoverKind::finite; }
};

inline double direct_total_time(const CrossoverInput& c, double t) { return c.t_fact + t * c.t_slu_solve; }
inline double iterative_total_time(const CrossoverInput& c, double t) { return c.t_pc + t * c.t_is_solve; }

/// t0 = (t_fact - t_pc) / (t_is_solve - t_slu_solve). Returns a sentinel
/// kind when one line lies below the other for every t >= 0.
inline CrossoverEstimate empirical_t0(const CrossoverInput& c) {
  c.validate();
  const double slope = c.t_is_solve - c.t_slu_solve;
  const double offset = c.t_fact - c.t_pc;
  if (slope > 0.0) {
    // Iterative grows faster: direct wins beyond t0, and everywhere when its
    // setup is no more expensive.
    if (offset <= 0.0) return {CrossoverKind::direct_always_faster, 0.0, true};
    return {CrossoverKind::finite, offset / slope, true};
  }
  if (offset >= 0.0) return {CrossoverKind::iterative_always_faster, 0.0, false};
  if (slope == 0.0) return {CrossoverKind::direct_always_faster, 0.0, true};
  // Direct setup is cheaper but its per-rhs cost is higher: iterative wins beyond t0.
  return {CrossoverKind::finite, offset / slope, false};
}

/// Operation-count model for the crossover. All quantities are counts.
struct CostModelInput {
  std::uint64_t n = 1;      // unknowns
  std::uint64_t m = 1;      // nonzeros
  std::uint64_t k_max = 2;  // largest iteration count over the right-hand sides
  std::uint64_t phi_n = 0;  // preconditioner setup cost in operations

  void validate() const {
    detail::require(n >= 1 && m >= n && k_max >= 1, ErrorCode::invalid_argument,
                    "cost model needs n >= 1, m >= n, k_max >= 1");
  }
};

/// Direct costs m + t n, iterative costs phi + k_max t n, so direct is cheaper
/// once t > (m - phi) / (n (k_max - 1)). With phi = 0 this is m / (n (k_max - 1)).
/// The factorization is charged O(m), which ignores fill-in; the value is an
/// optimistic lower bound for the direct side.
inline double analytic_t0(const CostModelInput& c) {
  c.validate();
  if (c.k_max < 2) detail::fail(ErrorCode::degenerate_kmax, "k_max must be at least 2");
  if (c.phi_n >= c.m) return 0.0;
  // Reduce the fraction first so scaling m and n together gives the same double.
  std::uint64_t num = c.m - c.phi_n;
  std::uint64_t den = c.n * (c.k_max - 1);
  const std::uint64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace sparsebench
