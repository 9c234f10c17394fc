#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparsebench/advisor/crossover.hpp"
#include "sparsebench/core/text_io.hpp"

namespace sparsebench {

enum class SolverChoice { direct, iterative, either };

inline std::string to_string(SolverChoice c) {
  switch (c) {
    case SolverChoice::direct: return "direct";
    case SolverChoice::iterative: return "iterative";
    case SolverChoice::either: return "either";
  }
  return "";
}

/// Application requirements. n, nnz, accuracy, memory budget and rhs count
/// are mandatory; t0 comes from `measured` when present, otherwise from the
/// cost model with `k_max`.
struct Requirements {
  std::optional<double> accuracy;
  std::optional<double> memory_budget_bytes;
  std::optional<Index> rhs_count;
  bool regular_grid = true;
  std::optional<Index> n;
  std::optional<Index> nnz;
  std::optional<CrossoverInput> measured;
  std::optional<Index> k_max;
  Index phi_n = 0;
  /// Estimated LU storage is nnz * fill_factor * 16 bytes.
  double fill_factor = 50.0;
};

struct FiredRule {
  std::string id;
  std::string detail;

  friend bool operator==(const FiredRule&, const FiredRule&) = default;
};

struct Recommendation {
  SolverChoice choice = SolverChoice::either;
  std::vector<FiredRule> rationale;
  std::optional<double> t0_empirical;
  std::optional<std::string> t0_empirical_kind;
  std::optional<double> t0_analytic;
  Requirements inputs;
};

inline double estimated_lu_bytes(const Requirements& req) {
  return static_cast<double>(*req.nnz) * req.fill_factor * 16.0;
}

/// Rule cascade, first match wins:
///   1. estimated LU storage exceeds the memory budget -> iterative
///   2. accuracy target at or below 1e-14              -> direct
///   3. more right-hand sides than the crossover t0    -> direct
///   4. otherwise                                      -> iterative
inline Recommendation recommend(const Requirements& req) {
  if (!req.accuracy || !req.memory_budget_bytes || !req.rhs_count || !req.n || !req.nnz)
    detail::fail(ErrorCode::incomplete_requirements,
                 "accuracy, memory budget, rhs count, n and nnz are all required");
  detail::require(*req.rhs_count >= 1 && *req.n >= 1 && req.fill_factor > 0.0, ErrorCode::invalid_argument,
                  "rhs count and n must be positive");

  Recommendation rec;
  rec.inputs = req;
  if (req.measured) {
    const CrossoverEstimate est = empirical_t0(*req.measured);
    rec.t0_empirical_kind = to_string(est.kind);
    if (est.finite()) rec.t0_empirical = est.t0;
  }
  if (req.k_max && *req.k_max >= 2 && *req.nnz >= *req.n)
    rec.t0_analytic = analytic_t0({*req.n, *req.nnz, *req.k_max, req.phi_n});

  const double lu_bytes = estimated_lu_bytes(req);
  if (lu_bytes > *req.memory_budget_bytes) {
    rec.choice = SolverChoice::iterative;
    rec.rationale.push_back({"memory", "estimated LU storage " + format_double(lu_bytes) +
                                           " B exceeds budget " + format_double(*req.memory_budget_bytes) +
                                           " B; iterative solvers need little beyond the matrix"});
    return rec;
  }
  if (*req.accuracy <= 1e-14) {
    rec.choice = SolverChoice::direct;
    rec.rationale.push_back({"accuracy", "target " + format_double(*req.accuracy) +
                                             " is near round-off; direct solvers reach it"});
    return rec;
  }

  const double t = static_cast<double>(*req.rhs_count);
  std::optional<double> t0;
  std::string source;
  if (req.measured) {
    const CrossoverEstimate est = empirical_t0(*req.measured);
    source = "empirical";
    if (est.kind == CrossoverKind::direct_always_faster)
      t0 = 0.0;
    else if (est.finite() && est.direct_faster_above)
      t0 = est.t0;
  } else if (rec.t0_analytic) {
    t0 = rec.t0_analytic;
    source = "analytic";
  } else {
    detail::fail(ErrorCode::incomplete_requirements, "crossover needs measured times or k_max >= 2");
  }
  if (t0 && t > *t0) {
    rec.choice = SolverChoice::direct;
    rec.rationale.push_back({"rhs-count", std::to_string(*req.rhs_count) + " right-hand sides exceed " + source +
                                              " t0 = " + format_double(*t0) + "; one factorization is amortized"});
    return rec;
  }
  rec.choice = SolverChoice::iterative;
  rec.rationale.push_back({"default", "memory fits, accuracy target is moderate and t does not exceed t0"});
  return rec;
}

inline nlohmann::json to_json(const Recommendation& rec) {
  nlohmann::json j;
  j["choice"] = to_string(rec.choice);
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : rec.rationale) rules.push_back({{"rule", r.id}, {"detail", r.detail}});
  j["rules_fired"] = rules;
  j["t0_empirical"] = rec.t0_empirical ? nlohmann::json(*rec.t0_empirical) : nlohmann::json(nullptr);
  j["t0_analytic"] = rec.t0_analytic ? nlohmann::json(*rec.t0_analytic) : nlohmann::json(nullptr);
  return j;
}

}  // namespace sparsebench
