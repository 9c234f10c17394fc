#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sparsebench/core/text_io.hpp"
#include "sparsebench/problem/analytic_field.hpp"

namespace sparsebench {

using Tet = std::array<Index, 4>;

/// Tetrahedral mesh with a Dirichlet boundary flag per vertex. Every tet is
/// positively oriented: det[v1-v0, v2-v0, v3-v0] > 0.
struct TetMesh {
  std::vector<Point3> vertices;
  std::vector<Tet> tets;
  std::vector<bool> boundary;

  friend bool operator==(const TetMesh&, const TetMesh&) = default;
};

namespace geom {

inline Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Point3 cross(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

inline double signed_volume(const Point3& p0, const Point3& p1, const Point3& p2, const Point3& p3) {
  return dot(sub(p1, p0), cross(sub(p2, p0), sub(p3, p0))) / 6.0;
}

}  // namespace geom

inline double signed_volume(const TetMesh& mesh, const Tet& t) {
  const auto& v = mesh.vertices;
  return geom::signed_volume(v[t[0]], v[t[1]], v[t[2]], v[t[3]]);
}

inline double bounding_box_diagonal(const TetMesh& mesh) {
  if (mesh.vertices.empty()) return 0.0;
  Point3 lo = mesh.vertices.front(), hi = lo;
  for (const auto& p : mesh.vertices)
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  return geom::norm(geom::sub(hi, lo));
}

/// Tets with volume below this are rejected as degenerate.
inline double degenerate_volume_threshold(const TetMesh& mesh) {
  const double d = bounding_box_diagonal(mesh);
  return 1e-14 * d * d * d;
}

/// Throws DegenerateTet, InvalidIndex or InvalidArgument when the mesh
/// breaks an invariant.
inline void validate_mesh(const TetMesh& mesh) {
  detail::require(!mesh.tets.empty(), ErrorCode::invalid_argument, "mesh has no tets");
  detail::require(mesh.boundary.size() == mesh.vertices.size(), ErrorCode::dimension_mismatch,
                  "boundary flags must match vertex count");
  std::vector<bool> used(mesh.vertices.size(), false);
  const double min_volume = degenerate_volume_threshold(mesh);
  for (Index t = 0; t < mesh.tets.size(); ++t) {
    for (Index v : mesh.tets[t]) {
      if (v >= mesh.vertices.size())
        throw IndexedError(ErrorCode::invalid_index, t, "tet references a missing vertex");
      used[v] = true;
    }
    if (!(signed_volume(mesh, mesh.tets[t]) >= min_volume))
      throw IndexedError(ErrorCode::degenerate_tet, t, "tet volume below threshold");
  }
  for (Index v = 0; v < used.size(); ++v)
    if (!used[v]) throw IndexedError(ErrorCode::invalid_argument, v, "vertex not referenced by any tet");
}

/// Lattice of (k+1)^3 vertices on the unit cube, each cell split into six
/// tets around its main diagonal. Interior vertices are moved by a seeded
/// uniform offset of at most jitter*h per coordinate; an offset that inverts
/// an incident tet is halved, up to eight times.
inline TetMesh generate_jittered_tet_mesh(Index k, double jitter, std::uint64_t seed) {
  detail::require(k >= 2, ErrorCode::invalid_argument, "need at least 2 cells per axis");
  detail::require(jitter >= 0.0 && jitter <= 0.3, ErrorCode::invalid_argument,
                  "jitter must lie in [0, 0.3]");
  const Index m = k + 1;
  const double h = 1.0 / static_cast<double>(k);
  auto vid = [m](Index i, Index j, Index l) { return i + m * (j + m * l); };

  TetMesh mesh;
  mesh.vertices.resize(m * m * m);
  mesh.boundary.resize(m * m * m);
  for (Index l = 0; l < m; ++l)
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < m; ++i) {
        mesh.vertices[vid(i, j, l)] = {static_cast<double>(i) * h, static_cast<double>(j) * h,
                                       static_cast<double>(l) * h};
        mesh.boundary[vid(i, j, l)] = i == 0 || j == 0 || l == 0 || i == k || j == k || l == k;
      }

  static constexpr int axis_orders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                            {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.tets.reserve(6 * k * k * k);
  for (Index l = 0; l < k; ++l)
    for (Index j = 0; j < k; ++j)
      for (Index i = 0; i < k; ++i)
        for (const auto& order : axis_orders) {
          std::array<Index, 3> c = {i, j, l};
          Tet t{};
          t[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[order[s]];
            t[s + 1] = vid(c[0], c[1], c[2]);
          }
          if (signed_volume(mesh, t) < 0.0) std::swap(t[2], t[3]);
          mesh.tets.push_back(t);
        }

  if (jitter == 0.0) return mesh;

  std::vector<std::vector<Index>> incident(mesh.vertices.size());
  for (Index t = 0; t < mesh.tets.size(); ++t)
    for (Index v : mesh.tets[t]) incident[v].push_back(t);

  const double min_volume = degenerate_volume_threshold(mesh);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Index v = 0; v < mesh.vertices.size(); ++v) {
    if (mesh.boundary[v]) continue;
    const Point3 base = mesh.vertices[v];
    Point3 offset;
    for (auto& o : offset) o = unit(rng) * jitter * h;
    bool placed = false;
    double scale = 1.0;
    for (int attempt = 0; attempt <= 8 && !placed; ++attempt, scale *= 0.5) {
      for (int d = 0; d < 3; ++d) mesh.vertices[v][d] = base[d] + scale * offset[d];
      placed = true;
      for (Index t : incident[v])
        if (!(signed_volume(mesh, mesh.tets[t]) > min_volume)) {
          placed = false;
          break;
        }
    }
    if (!placed) {
      mesh.vertices[v] = base;
      throw IndexedError(ErrorCode::jitter_too_large, v, "no valid displacement after 8 halvings");
    }
  }
  return mesh;
}

/// Text format: `V T`, then V lines `x y z flag`, then T lines `i0 i1 i2 i3`.
inline void write_mesh(std::ostream& out, const TetMesh& mesh) {
  out << mesh.vertices.size() << ' ' << mesh.tets.size() << '\n';
  for (Index v = 0; v < mesh.vertices.size(); ++v) {
    const auto& p = mesh.vertices[v];
    out << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << ' '
        << (mesh.boundary[v] ? 1 : 0) << '\n';
  }
  for (const auto& t : mesh.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

inline TetMesh read_mesh(std::istream& in) {
  detail::LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields)) reader.error("missing header");
  const auto nv = detail::read_field<Index>(fields, reader, "vertex count");
  const auto nt = detail::read_field<Index>(fields, reader, "tet count");
  detail::expect_end(fields, reader);
  if (nt == 0) reader.error("mesh must contain at least one tet");

  TetMesh mesh;
  mesh.vertices.resize(nv);
  mesh.boundary.resize(nv);
  for (Index v = 0; v < nv; ++v) {
    if (!reader.next(fields)) reader.error("file ended inside vertex section");
    for (int d = 0; d < 3; ++d) mesh.vertices[v][d] = detail::read_field<double>(fields, reader, "coordinate");
    const auto flag = detail::read_field<int>(fields, reader, "boundary flag");
    if (flag != 0 && flag != 1) reader.error("boundary flag must be 0 or 1");
    mesh.boundary[v] = flag == 1;
    detail::expect_end(fields, reader);
  }
  mesh.tets.resize(nt);
  for (Index t = 0; t < nt; ++t) {
    if (!reader.next(fields)) reader.error("file ended inside tet section");
    for (auto& idx : mesh.tets[t]) {
      idx = detail::read_field<Index>(fields, reader, "vertex index");
      if (idx >= nv) throw IndexedError(ErrorCode::invalid_index, reader.line_no(), "vertex index out of range on line");
    }
    detail::expect_end(fields, reader);
  }
  if (reader.next(fields)) reader.error("unexpected content after tet section");
  return mesh;
}

inline void write_mesh_file(const std::string& path, const TetMesh& mesh) {
  std::ofstream out(path);
  if (!out) detail::fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  write_mesh(out, mesh);
  if (!out) detail::fail(ErrorCode::io_error, "write failed: " + path);
}

inline TetMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorCode::io_error, "cannot open " + path);
  return read_mesh(in);
}

}  // namespace sparsebench
