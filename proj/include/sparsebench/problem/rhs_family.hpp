#pragma once

#include <numbers>

#include "sparsebench/problem/system.hpp"

namespace sparsebench {

/// Boundary field of column s in a family of t: a unit-slope plane rotating
/// in the xy-plane, theta_s = s * pi / (2t).
inline LinearField rhs_family_field(Index s, Index t) {
  const double theta = static_cast<double>(s) * std::numbers::pi / (2.0 * static_cast<double>(t));
  return {std::cos(theta), std::sin(theta), 0.0, 0.0};
}

/// t right-hand sides sharing the system's matrix. Interior entries are zero;
/// boundary entries sample the column's rotated plane.
inline DenseBlock make_rhs_family(const AssembledSystem& sys, Index t) {
  detail::require(t >= 1, ErrorCode::invalid_argument, "rhs family needs t >= 1");
  const Index n = sys.size();
  DenseBlock block(n, t, 0.0);
  for (Index s = 0; s < t; ++s) {
    const AnalyticField f = rhs_family_field(s, t);
    for (Index i = 0; i < n; ++i)
      if (sys.boundary[i]) block(i, s) = evaluate(f, sys.nodes[i]);
  }
  return block;
}

/// Exact solution of every column of make_rhs_family(sys, t).
inline DenseBlock rhs_family_ground_truth(const AssembledSystem& sys, Index t) {
  detail::require(t >= 1, ErrorCode::invalid_argument, "rhs family needs t >= 1");
  DenseBlock block(sys.size(), t);
  for (Index s = 0; s < t; ++s) block.set_column(s, sample_field(sys.nodes, rhs_family_field(s, t)));
  return block;
}

}  // namespace sparsebench
