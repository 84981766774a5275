#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "hzplate/mesh.hpp"
#include "hzplate/quadrature.hpp"
#include "oracles.hpp"

using namespace hzplate;

namespace {

double boundary_length(const Mesh& mesh) {
  const GaussRule1D& rule = line_quadrature(12);
  double len = 0.0;
  for (int i = 0; i < mesh.num_edges(); ++i) {
    if (!mesh.is_boundary_edge(i)) continue;
    const int e = mesh.edge_elements(i)[0];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = 0.5 * (rule.points[q] + 1.0), h = 1e-6;
      const Vec2 a = mesh.geometry(e, oracle::edge_point(mesh, e, i, s + h)).x;
      const Vec2 b = mesh.geometry(e, oracle::edge_point(mesh, e, i, s - h)).x;
      len += 0.5 * rule.weights[q] * (a - b).norm() / (2 * h);
    }
  }
  return len;
}

void expect_euler(const Mesh& mesh) {
  EXPECT_EQ(mesh.num_vertices() - mesh.num_edges() + mesh.num_elements(), 1);
}

}  // namespace

TEST(SquareMesh, CountsAreaAndMarkers) {
  for (int k : {1, 3, 5, 7}) {
    const Mesh m = square_mesh(k);
    EXPECT_EQ(m.num_elements(), 1 << k);
    EXPECT_NEAR(m.area(), 1.0, 1e-14);
    expect_euler(m);
    std::set<int> markers;
    for (int i = 0; i < m.num_edges(); ++i)
      if (m.is_boundary_edge(i)) markers.insert(m.edge_marker(i));
      else EXPECT_EQ(m.edge_marker(i), 0);
    EXPECT_EQ(markers, (std::set<int>{1, 2, 3, 4}));
  }
  EXPECT_THROW(square_mesh(2), std::invalid_argument);
}

TEST(LShapeMesh, AreaBoundaryAndMarkers) {
  const Mesh m = lshape_mesh();
  EXPECT_EQ(m.num_elements(), 6);
  EXPECT_NEAR(m.area(), 3.0, 1e-14);
  EXPECT_NEAR(boundary_length(m), 8.0, 1e-9);
  std::set<int> markers;
  for (int i = 0; i < m.num_edges(); ++i)
    if (m.is_boundary_edge(i)) markers.insert(m.edge_marker(i));
  EXPECT_EQ(markers.size(), 8u);
  expect_euler(m);
}

TEST(DiskMesh, CubicBoundaryApproximatesCircle) {
  const Mesh lin = disk_mesh(24, 1), cub = disk_mesh(24, 3);
  EXPECT_EQ(lin.num_elements(), 24);
  EXPECT_EQ(cub.num_elements(), 24);
  const double pi = std::numbers::pi;
  EXPECT_GT(std::abs(lin.area() - pi), 0.05);
  EXPECT_LT(std::abs(cub.area() - pi), 1e-3);
  EXPECT_LT(std::abs(boundary_length(cub) - 2 * pi), 1e-3);
  // Curved-edge quadrature points lie on the circle up to the interpolation error.
  for (int i = 0; i < cub.num_edges(); ++i) {
    if (!cub.is_boundary_edge(i)) continue;
    EXPECT_GE(cub.edge_curve(i), 0);
    const int e = cub.edge_elements(i)[0];
    EXPECT_TRUE(cub.is_curved(e));
    for (double s : {0.0, 0.5, 1.0})
      EXPECT_NEAR(cub.geometry(e, oracle::edge_point(cub, e, i, s)).x.norm(), 1.0, 2e-3);
  }
  EXPECT_THROW(disk_mesh(25, 3), std::invalid_argument);
  EXPECT_THROW(disk_mesh(24, 2), std::invalid_argument);
}

TEST(Mesh, RejectsZeroAreaTriangles) {
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, {}, {}, 1), std::invalid_argument);
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}, {}, {}, 1), std::invalid_argument);
}

TEST(Mesh, AcceptsEitherOrientation) {
  const Mesh a({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {}, {}, 1);
  const Mesh b({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}, {}, {}, 1);
  EXPECT_GT(a.geometry(0, Vec2(0.2, 0.2)).det, 0.0);
  EXPECT_GT(b.geometry(0, Vec2(0.2, 0.2)).det, 0.0);
  EXPECT_NEAR(a.area(), 0.5, 1e-15);
}

TEST(Mesh, EdgesAreSortedAndOrientationsConsistent) {
  const Mesh m = oracle::random_curved_mesh(3);
  for (int i = 0; i < m.num_edges(); ++i) EXPECT_LT(m.edge(i)[0], m.edge(i)[1]);
  for (int e = 0; e < m.num_elements(); ++e)
    for (int le = 0; le < 3; ++le) {
      const auto [a, b] = reference_edges()[le].vertices;
      const int ga = m.triangle(e)[a], gb = m.triangle(e)[b];
      EXPECT_EQ(m.edge_orientation(e, le), ga < gb ? 1 : -1);
      const auto& ed = m.edge(m.element_edge(e, le));
      EXPECT_EQ(std::min(ga, gb), ed[0]);
      EXPECT_EQ(std::max(ga, gb), ed[1]);
    }
}

TEST(Mesh, NeighboursSeeTheSameEdgePoints) {
  const Mesh m = oracle::random_curved_mesh(4);
  for (int i = 0; i < m.num_edges(); ++i) {
    if (m.is_boundary_edge(i)) continue;
    const auto [a, b] = m.edge_elements(i);
    for (double s : {0.1, 0.5, 0.77})
      EXPECT_LE((m.geometry(a, oracle::edge_point(m, a, i, s)).x - m.geometry(b, oracle::edge_point(m, b, i, s)).x)
                    .norm(),
                1e-14);
  }
}

TEST(Mesh, CofactorNormalIsOrthogonalToMappedTangent) {
  const Mesh m = disk_mesh(24, 3);
  for (int e = 0; e < m.num_elements(); ++e)
    for (const auto& ref : reference_edges())
      for (double s : {0.2, 0.6}) {
        const Vec2 xi = (1 - s) * Vec2(0.0, 0.0) + s * Vec2(0.3, 0.4);
        const GeometryPoint g = m.geometry(e, xi);
        EXPECT_NEAR((g.J * ref.tau).dot(g.cof * ref.nu), 0.0, 1e-13);
      }
}

TEST(Mesh, JacobianMatchesFiniteDifferences) {
  const Mesh m = disk_mesh(24, 3);
  const double h = 1e-6;
  for (int e = 0; e < m.num_elements(); ++e) {
    if (!m.is_curved(e)) continue;
    const Vec2 xi(0.3, 0.25);
    const GeometryPoint g = m.geometry(e, xi);
    for (int d = 0; d < 2; ++d) {
      Vec2 dx = Vec2::Zero();
      dx[d] = h;
      const Vec2 fd = (m.geometry(e, xi + dx).x - m.geometry(e, xi - dx).x) / (2 * h);
      EXPECT_LE((fd - g.J.col(d)).norm(), 1e-8);
      const Mat2 fdj = (m.geometry(e, xi + dx).J - m.geometry(e, xi - dx).J) / (2 * h);
      EXPECT_LE((fdj - g.dJ[d]).norm(), 1e-7);
    }
  }
}

TEST(Refinement, UniformQuadruplesAndPreservesBoundary) {
  const Mesh coarse = disk_mesh(24, 3);
  const Mesh fine = refine_uniform(coarse);
  EXPECT_EQ(fine.num_elements(), 4 * coarse.num_elements());
  expect_euler(fine);
  EXPECT_LT(std::abs(fine.area() - std::numbers::pi), std::abs(coarse.area() - std::numbers::pi));
  for (int i = 0; i < fine.num_edges(); ++i)
    if (fine.is_boundary_edge(i)) {
      EXPECT_GE(fine.edge_curve(i), 0);
      // New boundary vertices sit on the circle exactly.
      for (int v : fine.edge(i)) EXPECT_NEAR(fine.vertex(v).norm(), 1.0, 1e-14);
    }
}

TEST(Refinement, BisectionIsConformingAndKeepsMarkers) {
  Mesh m = lshape_mesh();
  for (int step = 0; step < 6; ++step) {
    // Refine the elements touching the origin.
    std::vector<int> marked;
    for (int e = 0; e < m.num_elements(); ++e)
      for (int v : m.triangle(e))
        if (m.vertex(v).norm() < 1e-14) marked.push_back(e);
    const Mesh next = refine(m, marked);
    EXPECT_GT(next.num_elements(), m.num_elements());
    EXPECT_NEAR(next.area(), 3.0, 1e-13);
    expect_euler(next);
    for (int i = 0; i < next.num_edges(); ++i) {
      // Conforming: interior edges have two neighbours, boundary edges lie on the L-shape boundary.
      if (next.is_boundary_edge(i)) {
        EXPECT_GE(next.edge_marker(i), 1);
        EXPECT_LE(next.edge_marker(i), 8);
      } else {
        EXPECT_GE(next.edge_elements(i)[1], 0);
      }
    }
    m = next;
  }
  EXPECT_NEAR(boundary_length(m), 8.0, 1e-9);
  EXPECT_THROW(refine(m, {}), std::invalid_argument);
  EXPECT_THROW(refine(m, {m.num_elements()}), std::invalid_argument);
}

TEST(Refinement, BisectionKeepsShapeRegularity) {
  Mesh m = refine_uniform(lshape_mesh());
  for (int step = 0; step < 10; ++step) {
    std::vector<int> marked;
    for (int e = 0; e < m.num_elements(); ++e)
      for (int v : m.triangle(e))
        if (m.vertex(v).norm() < 1e-14) marked.push_back(e);
    m = refine(m, marked);
  }
  double min_angle = 180.0;
  for (int e = 0; e < m.num_elements(); ++e)
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = m.vertex(m.triangle(e)[k]);
      const Vec2 u = m.vertex(m.triangle(e)[(k + 1) % 3]) - a;
      const Vec2 v = m.vertex(m.triangle(e)[(k + 2) % 3]) - a;
      min_angle = std::min(min_angle, std::acos(u.dot(v) / (u.norm() * v.norm())) * 180.0 / std::numbers::pi);
    }
  EXPECT_GE(min_angle, 20.0);
}
