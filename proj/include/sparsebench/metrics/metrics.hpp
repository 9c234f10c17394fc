#pragma once

#include <map>
#include <optional>

#include "sparsebench/core/dense.hpp"

namespace sparsebench {

/// ||ground_truth - computed||_2 / ||ground_truth||_2
inline double x_err(std::span<const double> ground_truth, std::span<const double> computed) {
  require_same_length(ground_truth, computed);
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    const double d = ground_truth[i] - computed[i];
    diff += d * d;
    ref += ground_truth[i] * ground_truth[i];
  }
  if (ref == 0.0) detail::fail(ErrorCode::zero_ground_truth, "ground truth has zero norm");
  return std::sqrt(diff) / std::sqrt(ref);
}

namespace detail {
template <class Map>
Index resolve_baseline(const Map& m, std::optional<Index> base) {
  if (m.empty()) fail(ErrorCode::missing_baseline, "no measurements");
  const Index b = base.value_or(m.begin()->first);
  if (b == 0 || !m.contains(b)) fail(ErrorCode::missing_baseline, "baseline " + std::to_string(b) + " not measured");
  return b;
}
}  // namespace detail

/// Parallel efficiency in percent relative to the baseline unit count
/// (default: the smallest measured): T(base) * base / (T(n) * n) * 100.
inline std::map<Index, double> efficiency(const std::map<Index, double>& times,
                                          std::optional<Index> base = std::nullopt) {
  const Index b = detail::resolve_baseline(times, base);
  const double tb = times.at(b);
  std::map<Index, double> out;
  for (const auto& [units, t] : times) {
    const double speedup = tb / t;
    out[units] = speedup / (static_cast<double>(units) / static_cast<double>(b)) * 100.0;
  }
  return out;
}

/// FLOPS efficiency in percent: F(n) / F(base) / (n / base) * 100.
inline std::map<Index, double> flops_efficiency(const std::map<Index, double>& rates,
                                                std::optional<Index> base = std::nullopt) {
  const Index b = detail::resolve_baseline(rates, base);
  const double fb = rates.at(b);
  std::map<Index, double> out;
  for (const auto& [units, f] : rates)
    out[units] = f / fb / (static_cast<double>(units) / static_cast<double>(b)) * 100.0;
  return out;
}

}  // namespace sparsebench
