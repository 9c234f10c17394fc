#pragma once

#include "sparsebench/problem/system.hpp"

namespace sparsebench {

/// Uniform 3D lattice of nx * ny * nz nodes with spacing h. Nodes are numbered
/// lexicographically with x fastest.
struct RegularGrid3 {
  Index nx = 3, ny = 3, nz = 3;
  double h = 0.5;

  /// Unit cube with n nodes per axis.
  static RegularGrid3 cube(Index n) {
    return {n, n, n, n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0};
  }

  Index node_count() const noexcept { return nx * ny * nz; }
  Index interior_count() const noexcept {
    return nx < 2 || ny < 2 || nz < 2 ? 0 : (nx - 2) * (ny - 2) * (nz - 2);
  }
  Index node(Index i, Index j, Index k) const noexcept { return i + nx * (j + ny * k); }
  Point3 position(Index i, Index j, Index k) const noexcept {
    return {static_cast<double>(i) * h, static_cast<double>(j) * h, static_cast<double>(k) * h};
  }
  bool on_boundary(Index i, Index j, Index k) const noexcept {
    return i == 0 || j == 0 || k == 0 || i + 1 == nx || j + 1 == ny || k + 1 == nz;
  }
};

/// Nonzeros of the assembled 7-point matrix: 7 per interior row, 1 per
/// boundary row.
constexpr Index fd_laplacian_nnz(Index nx, Index ny, Index nz) {
  const Index n = nx * ny * nz;
  const Index interior = (nx - 2) * (ny - 2) * (nz - 2);
  return 7 * interior + (n - interior);
}

/// 7-point Laplacian with unit edge weights and negative diagonal. Boundary
/// nodes keep identity rows carrying the Dirichlet value.
inline AssembledSystem assemble_fd_laplacian(const RegularGrid3& grid, const AnalyticField& f) {
  if (grid.nx < 3 || grid.ny < 3 || grid.nz < 3)
    detail::fail(ErrorCode::grid_too_small, "each grid axis needs at least 3 nodes");
  detail::require(grid.h > 0.0, ErrorCode::invalid_argument, "grid spacing must be positive");

  const Index n = grid.node_count();
  AssembledSystem sys;
  sys.b.assign(n, 0.0);
  sys.ground_truth.resize(n);
  sys.nodes.resize(n);
  sys.boundary.resize(n);

  std::vector<Index> row_ptr(n + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(fd_laplacian_nnz(grid.nx, grid.ny, grid.nz));
  values.reserve(col_idx.capacity());

  const Index sx = 1, sy = grid.nx, sz = grid.nx * grid.ny;
  for (Index k = 0; k < grid.nz; ++k)
    for (Index j = 0; j < grid.ny; ++j)
      for (Index i = 0; i < grid.nx; ++i) {
        const Index row = grid.node(i, j, k);
        const Point3 p = grid.position(i, j, k);
        sys.nodes[row] = p;
        sys.ground_truth[row] = evaluate(f, p);
        sys.boundary[row] = grid.on_boundary(i, j, k);
        if (sys.boundary[row]) {
          col_idx.push_back(row);
          values.push_back(1.0);
          sys.b[row] = sys.ground_truth[row];
        } else {
          // Ascending column order: -z, -y, -x, self, +x, +y, +z.
          const Index cols[7] = {row - sz, row - sy, row - sx, row, row + sx, row + sy, row + sz};
          for (Index c : cols) {
            col_idx.push_back(c);
            values.push_back(c == row ? -6.0 : 1.0);
          }
        }
        row_ptr[row + 1] = col_idx.size();
      }
  sys.A = CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
  return sys;
}

}  // namespace sparsebench
