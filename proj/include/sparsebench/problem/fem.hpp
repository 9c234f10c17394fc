#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "sparsebench/problem/system.hpp"
#include "sparsebench/problem/tet_mesh.hpp"

namespace sparsebench {

namespace detail {

// Local vertex pairs of the six tet edges; kOpposite[e] is the edge not
// sharing a vertex with kEdges[e].
inline constexpr std::array<std::array<int, 2>, 6> kEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 2>, 6> kOpposite = {
    {{2, 3}, {1, 3}, {1, 2}, {0, 3}, {0, 2}, {0, 1}}};

/// l * cot(alpha) / 6 for edge (a, b) of one tet, where the opposite edge
/// (c, d) has length l and the tet's dihedral angle there is alpha.
inline double tet_edge_weight(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  using namespace geom;
  const Point3 axis = sub(d, c);
  const double len = norm(axis);
  const Point3 e = {axis[0] / len, axis[1] / len, axis[2] / len};
  Point3 u = sub(a, c), v = sub(b, c);
  const double ue = dot(u, e), ve = dot(v, e);
  for (int k = 0; k < 3; ++k) {
    u[k] -= ue * e[k];
    v[k] -= ve * e[k];
  }
  const double cot_alpha = dot(u, v) / norm(cross(u, v));
  return len * cot_alpha / 6.0;
}

inline std::pair<Index, Index> edge_key(Index i, Index j) { return i < j ? std::pair{i, j} : std::pair{j, i}; }

}  // namespace detail

/// Cotangent weight of edge (i, j), summed over every tet containing both
/// vertices.
inline double cotangent_weight(const TetMesh& mesh, Index i, Index j) {
  detail::require(i < mesh.vertices.size() && j < mesh.vertices.size(),
                  ErrorCode::index_out_of_range, "vertex index out of range");
  double w = 0.0;
  bool found = false;
  if (i != j) {
    for (const auto& t : mesh.tets)
      for (int e = 0; e < 6; ++e) {
        const Index a = t[detail::kEdges[e][0]], b = t[detail::kEdges[e][1]];
        if ((a == i && b == j) || (a == j && b == i)) {
          const auto& v = mesh.vertices;
          w += detail::tet_edge_weight(v[a], v[b], v[t[detail::kOpposite[e][0]]],
                                       v[t[detail::kOpposite[e][1]]]);
          found = true;
        }
      }
  }
  if (!found)
    detail::fail(ErrorCode::not_an_edge,
                 "(" + std::to_string(i) + ", " + std::to_string(j) + ") is not a mesh edge");
  return w;
}

/// Lumped mass: B(i,i) = sum of volumes of tets incident to vertex i.
inline DenseVector lumped_mass(const TetMesh& mesh) {
  DenseVector mass(mesh.vertices.size(), 0.0);
  for (const auto& t : mesh.tets) {
    const double vol = signed_volume(mesh, t);
    for (Index v : t) mass[v] += vol;
  }
  return mass;
}

/// Cotangent Laplacian L over all vertices: L(i,j) = w(i,j) on edges and
/// L(i,i) = -(sum of the row's off-diagonals, accumulated in column order).
/// Exactly symmetric.
inline CsrMatrix cotangent_laplacian(const TetMesh& mesh) {
  validate_mesh(mesh);
  std::vector<std::pair<std::pair<Index, Index>, double>> contrib;
  contrib.reserve(6 * mesh.tets.size());
  const auto& v = mesh.vertices;
  for (const auto& t : mesh.tets)
    for (int e = 0; e < 6; ++e) {
      const Index a = t[detail::kEdges[e][0]], b = t[detail::kEdges[e][1]];
      const double w = detail::tet_edge_weight(v[a], v[b], v[t[detail::kOpposite[e][0]]],
                                               v[t[detail::kOpposite[e][1]]]);
      contrib.push_back({detail::edge_key(a, b), w});
    }
  std::stable_sort(contrib.begin(), contrib.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  const Index n = v.size();
  std::vector<std::vector<std::pair<Index, double>>> rows(n);
  for (std::size_t k = 0; k < contrib.size();) {
    const auto key = contrib[k].first;
    double w = 0.0;
    for (; k < contrib.size() && contrib[k].first == key; ++k) w += contrib[k].second;
    rows[key.first].emplace_back(key.second, w);
    rows[key.second].emplace_back(key.first, w);
  }

  std::vector<Index> row_ptr(n + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (Index i = 0; i < n; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end());
    double off_sum = 0.0;
    for (const auto& [c, w] : row) off_sum += w;
    bool diag_placed = false;
    for (const auto& [c, w] : row) {
      if (!diag_placed && c > i) {
        col_idx.push_back(i);
        values.push_back(-off_sum);
        diag_placed = true;
      }
      col_idx.push_back(c);
      values.push_back(w);
    }
    if (!diag_placed) {
      col_idx.push_back(i);
      values.push_back(-off_sum);
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

/// Dirichlet problem on a tet mesh. Interior rows come from the cotangent
/// Laplacian (divided by the lumped mass when `scale_by_mass`), boundary rows
/// are identity rows with the sampled field on the right-hand side.
inline AssembledSystem assemble_fem_laplacian(const TetMesh& mesh, const AnalyticField& f,
                                              bool scale_by_mass = false) {
  const CsrMatrix lap = cotangent_laplacian(mesh);
  const DenseVector mass = scale_by_mass ? lumped_mass(mesh) : DenseVector{};
  const Index n = lap.n_rows();

  AssembledSystem sys;
  sys.nodes = mesh.vertices;
  sys.boundary = mesh.boundary;
  sys.ground_truth = sample_field(sys.nodes, f);
  sys.b.assign(n, 0.0);

  std::vector<Index> row_ptr(n + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(lap.nnz());
  values.reserve(lap.nnz());
  for (Index i = 0; i < n; ++i) {
    if (sys.boundary[i]) {
      col_idx.push_back(i);
      values.push_back(1.0);
      sys.b[i] = sys.ground_truth[i];
    } else {
      auto cols = lap.row_cols(i);
      auto vals = lap.row_values(i);
      for (Index k = 0; k < cols.size(); ++k) {
        col_idx.push_back(cols[k]);
        values.push_back(scale_by_mass ? vals[k] / mass[i] : vals[k]);
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  sys.A = CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
  return sys;
}

}  // namespace sparsebench
