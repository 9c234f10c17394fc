#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "sparsebench/core/csr.hpp"

namespace sparsebench {

enum class OrderingMethod { natural, minimum_degree };

inline std::string to_string(OrderingMethod m) {
  return m == OrderingMethod::natural ? "natural" : "mindeg";
}

inline OrderingMethod parse_ordering(const std::string& s) {
  if (s == "natural") return OrderingMethod::natural;
  if (s == "mindeg" || s == "minimum-degree") return OrderingMethod::minimum_degree;
  throw Error(ErrorCode::invalid_argument, "unknown ordering '" + s + "'");
}

/// Elimination sequence applied symmetrically to rows and columns:
/// position i of the permuted matrix holds original index col_perm(i).
struct EliminationOrdering {
  Permutation col_perm;
  OrderingMethod method = OrderingMethod::natural;
};

inline EliminationOrdering natural_order(const CsrMatrix& a) {
  detail::require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  detail::require(a.n_rows() > 0, ErrorCode::invalid_argument, "empty system");
  return {Permutation::identity(a.n_rows()), OrderingMethod::natural};
}

/// Greedy minimum degree on the graph of A + A^T; ties go to the smallest
/// vertex index. Runs on a quotient graph: each eliminated vertex becomes an
/// element holding its clique, and elements reached from the pivot are
/// absorbed. Degrees are exact, so the order matches explicit elimination.
inline EliminationOrdering minimum_degree_order(const CsrMatrix& a) {
  detail::require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  detail::require(a.n_rows() > 0, ErrorCode::invalid_argument, "empty system");
  const Index n = a.n_rows();
  auto vars = symmetric_adjacency(a);           // uneliminated neighbours
  std::vector<std::vector<Index>> elems(n);     // live elements touching a vertex
  std::vector<std::vector<Index>> members(n);   // clique of each live element
  std::vector<char> absorbed(n, 0);
  std::vector<Index> degree(n), mark(n, 0);
  Index stamp = 0;

  std::set<std::pair<Index, Index>> queue;
  for (Index v = 0; v < n; ++v) {
    degree[v] = vars[v].size();
    queue.emplace(degree[v], v);
  }

  std::vector<Index> order;
  order.reserve(n);
  std::vector<Index> clique;
  while (!queue.empty()) {
    const Index p = queue.begin()->second;
    queue.erase(queue.begin());
    order.push_back(p);

    ++stamp;
    mark[p] = stamp;
    clique.clear();
    for (Index u : vars[p])
      if (mark[u] != stamp) mark[u] = stamp, clique.push_back(u);
    for (Index e : elems[p]) {
      for (Index u : members[e])
        if (mark[u] != stamp) mark[u] = stamp, clique.push_back(u);
      absorbed[e] = 1;
      std::vector<Index>().swap(members[e]);
    }
    std::sort(clique.begin(), clique.end());
    std::vector<Index>().swap(vars[p]);
    std::vector<Index>().swap(elems[p]);
    const Index pivot_stamp = stamp;

    for (Index i : clique) {
      auto& vi = vars[i];
      // neighbours already covered by the new element are dropped
      vi.erase(std::remove_if(vi.begin(), vi.end(),
                              [&](Index u) { return u == p || mark[u] == pivot_stamp; }),
               vi.end());
      auto& ei = elems[i];
      ei.erase(std::remove_if(ei.begin(), ei.end(), [&](Index e) { return absorbed[e] != 0; }), ei.end());
      ei.push_back(p);
    }
    members[p] = clique;

    for (Index i : clique) {
      ++stamp;
      mark[i] = stamp;
      Index d = 0;
      for (Index u : vars[i])
        if (mark[u] != stamp) mark[u] = stamp, ++d;
      for (Index e : elems[i])
        for (Index u : members[e])
          if (mark[u] != stamp) mark[u] = stamp, ++d;
      queue.erase({degree[i], i});
      degree[i] = d;
      queue.emplace(d, i);
    }
  }
  return {Permutation(std::move(order)), OrderingMethod::minimum_degree};
}

inline EliminationOrdering compute_ordering(const CsrMatrix& a, OrderingMethod method) {
  return method == OrderingMethod::natural ? natural_order(a) : minimum_degree_order(a);
}

}  // namespace sparsebench
