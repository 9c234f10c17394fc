#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "sparsebench/core/dense.hpp"

namespace sparsebench {

/// One solve, direct or iterative. Optional fields are empty when they do not
/// apply (e.g. iterations for a direct solve).
struct SolveReport {
  std::string problem;
  std::string solver;
  std::string precond;
  std::optional<Index> blocks;
  std::optional<double> epsilon;
  Index n = 0;
  Index nnz = 0;
  Index t_rhs = 1;

  std::optional<double> order_s;
  std::optional<double> symbolic_s;
  std::optional<double> factor_s;
  std::optional<double> precond_s;
  std::optional<double> solve_s;
  std::optional<double> total_s;

  std::uint64_t flops = 0;
  std::optional<Index> iterations;
  std::optional<double> fill_density;
  std::uint64_t mem_bytes = 0;
  std::optional<double> x_err;
  std::optional<double> residual;
  bool converged = false;

  // Not part of the CSV schema; carried in JSON only.
  std::string ordering;
  std::optional<double> flop_rate;
  double timer_resolution_s =
      std::chrono::duration<double>(std::chrono::steady_clock::duration(1)).count();
  std::string error;
  std::string error_message;

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

/// Sets total_s and flop_rate from the phase timings.
inline void finalize_timing(SolveReport& r) {
  double total = 0.0;
  for (const auto& phase : {r.order_s, r.symbolic_s, r.factor_s, r.precond_s, r.solve_s})
    if (phase) total += *phase;
  r.total_s = total;
  r.flop_rate = total > 0.0 ? std::optional<double>(static_cast<double>(r.flops) / total) : std::nullopt;
}

}  // namespace sparsebench
