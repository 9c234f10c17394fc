#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "generators.hpp"
#include "sparsebench/direct/lu.hpp"
#include "sparsebench/metrics/metrics.hpp"
#include "sparsebench/problem/fem.hpp"
#include "sparsebench/problem/grid.hpp"
#include "sparsebench/problem/rhs_family.hpp"

using namespace sparsebench;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::invalid_argument;
}

TetMesh regular_tet() {
  const double s = 1.0 / std::sqrt(2.0);
  // Alternate corners of a cube with edge s give unit edges.
  TetMesh m;
  m.vertices = {{0, 0, 0}, {s, s, 0}, {s, 0, s}, {0, s, s}};
  m.tets = {{0, 1, 2, 3}};
  m.boundary = {true, true, true, true};
  if (signed_volume(m, m.tets[0]) < 0) std::swap(m.tets[0][2], m.tets[0][3]);
  return m;
}

/// Stiffness entries V * grad(phi_i) . grad(phi_j) of one tet, by inverting
/// the barycentric coordinate map.
std::array<std::array<double, 4>, 4> p1_stiffness(const std::array<Point3, 4>& p) {
  double j[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) j[r][c] = p[c + 1][r] - p[0][r];
  const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                     j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                     j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
  double inv[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      inv[r][c] = (j[r1][c1] * j[r2][c2] - j[r1][c2] * j[r2][c1]) / det;
    }
  // Rows of inv are the gradients of barycentric coordinates 1..3.
  std::array<Point3, 4> g;
  for (int k = 0; k < 3; ++k) g[k + 1] = {inv[k][0], inv[k][1], inv[k][2]};
  g[0] = {-(g[1][0] + g[2][0] + g[3][0]), -(g[1][1] + g[2][1] + g[3][1]), -(g[1][2] + g[2][2] + g[3][2])};
  const double vol = std::abs(det) / 6.0;
  std::array<std::array<double, 4>, 4> k{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) k[a][b] = vol * geom::dot(g[a], g[b]);
  return k;
}

bool on_unit_cube_face(const Point3& p) {
  for (double c : p)
    if (c == 0.0 || c == 1.0) return true;
  return false;
}

}  // namespace

TEST(FdLaplacian, ClosedFormAtFullScale) {
  EXPECT_EQ(fd_laplacian_nnz(128, 128, 128), 14099408u);
  EXPECT_EQ(fd_laplacian_nnz(256, 256, 256), 115099600u);
  EXPECT_EQ(fd_laplacian_nnz(512, 512, 512), 930123728u);
}

TEST(FdLaplacian, SmallCubeCounts) {
  const AssembledSystem s = assemble_fd_laplacian(RegularGrid3::cube(4), LinearField{});
  EXPECT_EQ(s.size(), 64u);
  EXPECT_EQ(s.A.nnz(), 112u);
}

TEST(FdLaplacian, AssembledNnzMatchesClosedFormProperty) {
  for (Index nx = 3; nx <= 7; ++nx)
    for (Index ny = 3; ny <= 6; ++ny)
      for (Index nz = 3; nz <= 5; ++nz) {
        const AssembledSystem s = assemble_fd_laplacian({nx, ny, nz, 0.1}, QuadHarmonicField{});
        EXPECT_EQ(s.A.nnz(), fd_laplacian_nnz(nx, ny, nz));
        EXPECT_EQ(s.size(), nx * ny * nz);
      }
}

TEST(FdLaplacian, RowStructure) {
  const RegularGrid3 g{5, 4, 6, 0.25};
  const AssembledSystem s = assemble_fd_laplacian(g, TrigHarmonicField{});
  s.check_consistent();
  for (Index k = 0; k < g.nz; ++k)
    for (Index j = 0; j < g.ny; ++j)
      for (Index i = 0; i < g.nx; ++i) {
        const Index r = g.node(i, j, k);
        auto vals = s.A.row_values(r);
        if (g.on_boundary(i, j, k)) {
          ASSERT_EQ(vals.size(), 1u);
          EXPECT_EQ(s.A.at(r, r), 1.0);
          EXPECT_EQ(s.b[r], s.ground_truth[r]);
        } else {
          ASSERT_EQ(vals.size(), 7u);
          EXPECT_EQ(s.A.at(r, r), -6.0);
          EXPECT_EQ(s.A.at(r, g.node(i + 1, j, k)), 1.0);
          EXPECT_EQ(s.A.at(r, g.node(i, j, k - 1)), 1.0);
          double sum = 0.0;
          for (double v : vals) sum += v;
          EXPECT_EQ(sum, 0.0);
          EXPECT_EQ(s.b[r], 0.0);
        }
      }
}

TEST(FdLaplacian, LexicographicXFastest) {
  const RegularGrid3 g = RegularGrid3::cube(3);
  const AssembledSystem s = assemble_fd_laplacian(g, LinearField{});
  EXPECT_EQ(s.nodes[1], (Point3{0.5, 0.0, 0.0}));
  EXPECT_EQ(s.nodes[3], (Point3{0.0, 0.5, 0.0}));
  EXPECT_EQ(s.nodes[9], (Point3{0.0, 0.0, 0.5}));
}

TEST(FdLaplacian, GridTooSmall) {
  EXPECT_EQ(code_of([] { assemble_fd_laplacian({2, 5, 5, 0.1}, LinearField{}); }), ErrorCode::grid_too_small);
  EXPECT_EQ(code_of([] { assemble_fd_laplacian({5, 5, 1, 0.1}, LinearField{}); }), ErrorCode::grid_too_small);
}

TEST(FdLaplacian, QuadraticFieldSatisfiesDiscreteSystem) {
  const AssembledSystem s = assemble_fd_laplacian(RegularGrid3::cube(6), QuadHarmonicField{});
  const DenseVector r = spmv(s.A, s.ground_truth);
  for (Index i = 0; i < s.size(); ++i) EXPECT_NEAR(r[i], s.b[i], 1e-14);
}

TEST(AnalyticField, AllVariantsHarmonic) {
  // Second differences with step e approximate the Laplacian.
  const double e = 1e-3;
  for (const AnalyticField& f : {AnalyticField{LinearField{1, 2, -0.5, 0.25}}, AnalyticField{QuadHarmonicField{}},
                                 AnalyticField{TrigHarmonicField{}}}) {
    const Point3 p{0.3, 0.7, 0.2};
    double lap = -6.0 * evaluate(f, p);
    for (int d = 0; d < 3; ++d) {
      Point3 a = p, b = p;
      a[d] += e;
      b[d] -= e;
      lap += evaluate(f, a) + evaluate(f, b);
    }
    EXPECT_NEAR(lap / (e * e), 0.0, 1e-5) << field_name(f);
  }
}

TEST(AnalyticField, ParseNames) {
  EXPECT_TRUE(std::holds_alternative<QuadHarmonicField>(parse_field("quad")));
  EXPECT_TRUE(std::holds_alternative<TrigHarmonicField>(parse_field("trig")));
  EXPECT_TRUE(std::holds_alternative<LinearField>(parse_field("linear")));
  EXPECT_THROW(parse_field("cubic"), Error);
}

TEST(CotangentWeight, RegularTetrahedron) {
  const TetMesh m = regular_tet();
  for (Index i = 0; i < 4; ++i)
    for (Index j = i + 1; j < 4; ++j) EXPECT_NEAR(cotangent_weight(m, i, j), 1.0 / (12.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(1.0 / (12.0 * std::sqrt(2.0)), 0.0589256, 1e-7);
}

TEST(CotangentWeight, MirrorTetDoubles) {
  TetMesh m = regular_tet();
  const Point3 apex = m.vertices[3];
  // Reflect the apex through the plane of the other three.
  const Point3 c = {(m.vertices[0][0] + m.vertices[1][0] + m.vertices[2][0]) / 3,
                    (m.vertices[0][1] + m.vertices[1][1] + m.vertices[2][1]) / 3,
                    (m.vertices[0][2] + m.vertices[1][2] + m.vertices[2][2]) / 3};
  m.vertices.push_back({2 * c[0] - apex[0], 2 * c[1] - apex[1], 2 * c[2] - apex[2]});
  m.boundary.push_back(true);
  Tet t{0, 1, 2, 4};
  if (signed_volume(m, t) < 0) std::swap(t[0], t[1]);
  m.tets.push_back(t);
  const double single = cotangent_weight(regular_tet(), 0, 1);
  EXPECT_NEAR(cotangent_weight(m, 0, 1), 2.0 * single, 1e-15);
}

TEST(CotangentWeight, RightDihedralContributesZero) {
  // Corner tet: the faces meeting at edge (a,d) are coordinate planes.
  const Point3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0}, d{0, 0, 1};
  EXPECT_NEAR(detail::tet_edge_weight(b, c, a, d), 0.0, 1e-16);
}

TEST(CotangentWeight, NotAnEdge) {
  TetMesh m = regular_tet();
  m.vertices.push_back({5, 5, 5});
  m.vertices.push_back({6, 5, 5});
  m.vertices.push_back({5, 6, 5});
  m.vertices.push_back({5, 5, 6});
  m.boundary.resize(8, true);
  m.tets.push_back({4, 5, 6, 7});
  EXPECT_EQ(code_of([&] { cotangent_weight(m, 0, 5); }), ErrorCode::not_an_edge);
}

TEST(LumpedMass, RegularTetrahedron) {
  const DenseVector b = lumped_mass(regular_tet());
  for (double v : b) EXPECT_NEAR(v, std::sqrt(2.0) / 12.0, 1e-15);
  EXPECT_NEAR(std::sqrt(2.0) / 12.0, 0.1178511, 1e-7);
}

TEST(CotangentLaplacian, MatchesP1StiffnessOracle) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const TetMesh m = generate_jittered_tet_mesh(3, 0.25, seed);
    std::map<std::pair<Index, Index>, double> oracle;
    for (const Tet& t : m.tets) {
      std::array<Point3, 4> p;
      for (int a = 0; a < 4; ++a) p[a] = m.vertices[t[a]];
      const auto k = p1_stiffness(p);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (a != b) oracle[{t[a], t[b]}] -= k[a][b];
    }
    const CsrMatrix l = cotangent_laplacian(m);
    for (const auto& [ij, w] : oracle) EXPECT_NEAR(l.at(ij.first, ij.second), w, 1e-12 * (1.0 + std::abs(w)));
    EXPECT_EQ(l.nnz(), oracle.size() + m.vertices.size());
  }
}

TEST(CotangentLaplacian, ExactlySymmetricWithZeroRowSums) {
  const TetMesh m = generate_jittered_tet_mesh(5, 0.3, 11);
  const CsrMatrix l = cotangent_laplacian(m);
  EXPECT_EQ(transpose(l), l);
  for (Index i = 0; i < l.n_rows(); ++i) {
    double off = 0.0, diag = 0.0;
    auto c = l.row_cols(i);
    auto v = l.row_values(i);
    for (Index k = 0; k < c.size(); ++k) (c[k] == i ? diag : off) += v[k];
    EXPECT_EQ(off + diag, 0.0);
    EXPECT_LT(diag, 0.0);
  }
}

TEST(FemLaplacian, MassScalingBreaksSymmetry) {
  const TetMesh m = generate_jittered_tet_mesh(4, 0.25, 3);
  const AssembledSystem plain = assemble_fem_laplacian(m, LinearField{});
  const AssembledSystem scaled = assemble_fem_laplacian(m, LinearField{}, true);
  const DenseVector mass = lumped_mass(m);
  for (double v : mass) EXPECT_GT(v, 0.0);
  for (Index i = 0; i < m.vertices.size(); ++i) {
    if (m.boundary[i]) {
      EXPECT_EQ(scaled.A.row_cols(i).size(), 1u);
      continue;
    }
    auto c = plain.A.row_cols(i);
    for (Index j : c) EXPECT_DOUBLE_EQ(scaled.A.at(i, j), plain.A.at(i, j) / mass[i]);
  }
  const CsrMatrix l = cotangent_laplacian(m);
  const CsrMatrix bl = assemble_fem_laplacian(m, LinearField{}, true).A;
  // Interior block of B^-1 L is generally not symmetric.
  bool asymmetric = false;
  for (Index i = 0; i < bl.n_rows() && !asymmetric; ++i)
    for (Index j : bl.row_cols(i))
      if (!m.boundary[i] && !m.boundary[j] && bl.at(i, j) != bl.at(j, i)) asymmetric = true;
  EXPECT_TRUE(asymmetric);
  EXPECT_EQ(transpose(l), l);
}

TEST(FemLaplacian, LinearFieldSolvedExactly) {
  for (double jitter : {0.0, 0.2}) {
    const TetMesh m = generate_jittered_tet_mesh(4, jitter, 5);
    const AssembledSystem s = assemble_fem_laplacian(m, LinearField{1, 2, -0.5, 0.25});
    const DenseVector x = lu_solve(factorize(s.A, OrderingMethod::minimum_degree), s.b);
    EXPECT_LE(x_err(s.ground_truth, x), 1e-10);
  }
}

TEST(FemLaplacian, DegenerateTetRejected) {
  TetMesh m = regular_tet();
  // Midpoint of edge (1,2) is coplanar with the base.
  m.vertices[3][0] = m.vertices[1][0] / 2 + m.vertices[2][0] / 2;
  m.vertices[3][1] = m.vertices[1][1] / 2 + m.vertices[2][1] / 2;
  m.vertices[3][2] = m.vertices[1][2] / 2 + m.vertices[2][2] / 2;
  EXPECT_EQ(code_of([&] { assemble_fem_laplacian(m, LinearField{}); }), ErrorCode::degenerate_tet);
}

TEST(JitteredMesh, UnjitteredLattice) {
  const TetMesh m = generate_jittered_tet_mesh(2, 0.0, 42);
  EXPECT_EQ(m.vertices.size(), 27u);
  EXPECT_EQ(m.tets.size(), 48u);
  for (const Tet& t : m.tets) EXPECT_NEAR(signed_volume(m, t), 0.125 / 6.0, 1e-16);
}

TEST(JitteredMesh, SeededDeterminism) {
  const TetMesh a = generate_jittered_tet_mesh(4, 0.25, 7);
  const TetMesh b = generate_jittered_tet_mesh(4, 0.25, 7);
  const TetMesh c = generate_jittered_tet_mesh(4, 0.25, 8);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.vertices, c.vertices);
}

TEST(JitteredMesh, BoundaryFixedAndVolumesPositive) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const Index k = 2 + rng() % 5;
    const double jitter = 0.3 * std::uniform_real_distribution<double>(0, 1)(rng);
    const TetMesh m = generate_jittered_tet_mesh(k, jitter, rng());
    EXPECT_EQ(m.vertices.size(), (k + 1) * (k + 1) * (k + 1));
    EXPECT_EQ(m.tets.size(), 6 * k * k * k);
    for (Index v = 0; v < m.vertices.size(); ++v) EXPECT_EQ(m.boundary[v], on_unit_cube_face(m.vertices[v]));
    for (const Tet& t : m.tets) EXPECT_GT(signed_volume(m, t), 0.0);
  }
}

TEST(JitteredMesh, RejectsBadArguments) {
  EXPECT_THROW(generate_jittered_tet_mesh(1, 0.1, 1), Error);
  EXPECT_THROW(generate_jittered_tet_mesh(3, 0.31, 1), Error);
  EXPECT_THROW(generate_jittered_tet_mesh(3, -0.1, 1), Error);
}

TEST(MeshText, RoundTrip) {
  const TetMesh m = generate_jittered_tet_mesh(2, 0.2, 9);
  std::stringstream s;
  write_mesh(s, m);
  EXPECT_EQ(read_mesh(s), m);
}

TEST(MeshText, TetIndexOutOfRange) {
  std::istringstream in("4 1\n0 0 0 1\n1 0 0 1\n0 1 0 1\n0 0 1 1\n0 1 2 4\n");
  EXPECT_EQ(code_of([&] { read_mesh(in); }), ErrorCode::invalid_index);
}

TEST(MeshText, EmptyTetsSection) {
  std::istringstream in("4 0\n0 0 0 1\n1 0 0 1\n0 1 0 1\n0 0 1 1\n");
  EXPECT_EQ(code_of([&] { read_mesh(in); }), ErrorCode::parse_error);
}

TEST(MeshText, MalformedVertexLine) {
  std::istringstream in("% header\n4 1\n0 0 0 1\n1 0 zero 1\n0 1 0 1\n0 0 1 1\n0 1 2 3\n");
  try {
    read_mesh(in);
    FAIL();
  } catch (const IndexedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_EQ(e.index(), 4u);
  }
}

TEST(RhsFamily, SingleColumnIsXCoordinate) {
  const AssembledSystem s = assemble_fd_laplacian(RegularGrid3::cube(4), QuadHarmonicField{});
  const DenseBlock b = make_rhs_family(s, 1);
  for (Index i = 0; i < s.size(); ++i) EXPECT_EQ(b(i, 0), s.boundary[i] ? s.nodes[i][0] : 0.0);
}

TEST(RhsFamily, EveryColumnSolvedExactlyByLu) {
  const AssembledSystem s = assemble_fd_laplacian(RegularGrid3::cube(8), QuadHarmonicField{});
  const Index t = 6;
  const DenseBlock b = make_rhs_family(s, t);
  const DenseBlock truth = rhs_family_ground_truth(s, t);
  const DenseBlock x = lu_solve_block(factorize(s.A, OrderingMethod::minimum_degree), b);
  for (Index k = 0; k < t; ++k) EXPECT_LE(x_err(truth.column(k), x.column(k)), 1e-10);
}

TEST(RhsFamily, ZeroColumnsRejected) {
  const AssembledSystem s = assemble_fd_laplacian(RegularGrid3::cube(3), QuadHarmonicField{});
  EXPECT_EQ(code_of([&] { make_rhs_family(s, 0); }), ErrorCode::invalid_argument);
}
