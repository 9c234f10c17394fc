#pragma once

#include <vector>

#include "sparsebench/core/csr.hpp"
#include "sparsebench/problem/analytic_field.hpp"

namespace sparsebench {

/// A linear system A u = b together with the sampled exact solution and the
/// node geometry it was built from.
struct AssembledSystem {
  CsrMatrix A;
  DenseVector b;
  DenseVector ground_truth;
  std::vector<Point3> nodes;
  std::vector<bool> boundary;

  Index size() const noexcept { return A.n_rows(); }

  void check_consistent() const {
    const Index n = A.n_rows();
    detail::require(A.is_square() && b.size() == n && ground_truth.size() == n &&
                        nodes.size() == n && boundary.size() == n,
                    ErrorCode::dimension_mismatch, "assembled system has inconsistent sizes");
  }
};

/// f evaluated at every node.
inline DenseVector sample_field(const std::vector<Point3>& nodes, const AnalyticField& f) {
  DenseVector out(nodes.size());
  for (Index i = 0; i < nodes.size(); ++i) out[i] = evaluate(f, nodes[i]);
  return out;
}

}  // namespace sparsebench
