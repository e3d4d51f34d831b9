#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sdkit/mesh.hpp"
#include "support.hpp"

namespace sdkit {
namespace {

TEST(Mesh, SingleCellCountsSatisfyEuler)
{
  const TriMesh m = build_mesh(1, BcCase::NN);
  EXPECT_EQ(m.num_triangles(), 4);
  EXPECT_EQ(m.num_vertices(), 6);
  EXPECT_EQ(m.num_edges(), 9);
  EXPECT_EQ(m.interface_edges().size(), 1u);
}

TEST(Mesh, TwoByTwoAllEssential)
{
  const TriMesh m = build_mesh(2, BcCase::EE);
  EXPECT_EQ(m.num_triangles(), 16);
  EXPECT_EQ(m.num_vertices(), 15);
  EXPECT_EQ(m.num_edges(), 30);
  EXPECT_EQ(m.interface_edges().size(), 2u);
  int boundary = 0;
  for (const Edge& e : m.edges()) {
    if (!e.on_boundary()) continue;
    ++boundary;
    EXPECT_TRUE(e.tag == BoundaryTag::StokesEssential || e.tag == BoundaryTag::DarcyEssential);
  }
  EXPECT_EQ(boundary, 12);
}

TEST(Mesh, InterfaceEdgesHaveOneNeighborPerSubdomain)
{
  for (int n : {1, 3, 8}) {
    const TriMesh m = build_mesh(n, BcCase::NE);
    for (int e : m.interface_edges()) {
      const Edge& edge = m.edge(e);
      ASSERT_FALSE(edge.on_boundary());
      std::multiset<Subdomain> doms{m.triangle(edge.triangles[0]).domain, m.triangle(edge.triangles[1]).domain};
      EXPECT_EQ(doms.count(Subdomain::Stokes), 1u);
      EXPECT_EQ(doms.count(Subdomain::Darcy), 1u);
      EXPECT_EQ(m.triangle(m.stokes_neighbor(e)).domain, Subdomain::Stokes);
      EXPECT_EQ(m.triangle(m.darcy_neighbor(e)).domain, Subdomain::Darcy);
      EXPECT_NEAR(m.vertex(edge.vertices[0]).x(), 1.0, 1e-15);
      EXPECT_NEAR(m.vertex(edge.vertices[1]).x(), 1.0, 1e-15);
    }
  }
}

TEST(Mesh, RejectsZeroSubdivisions)
{
  EXPECT_THROW((void)build_mesh(0, BcCase::NN), std::invalid_argument);
  EXPECT_THROW((void)build_mesh(-3, BcCase::EE), std::invalid_argument);
}

TEST(Mesh, MeshSizeIsCellDiagonal)
{
  const TriMesh m = build_mesh(4, BcCase::NN);
  EXPECT_NEAR(m.h(), std::sqrt(2.0) / 4.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.h_label(), 0.25);
}

TEST(EdgeGeometry, InterfaceEdge)
{
  const TriMesh m = build_mesh(2, BcCase::NN);
  for (int e : m.interface_edges()) {
    const EdgeGeometry g = m.edge_geometry(e);
    EXPECT_NEAR(g.length, 0.5, 1e-15);
    EXPECT_NEAR(g.normal.x(), 1.0, 1e-15);
    EXPECT_NEAR(g.normal.y(), 0.0, 1e-15);
  }
}

TEST(EdgeGeometry, BottomEdgesPointDown)
{
  const TriMesh m = build_mesh(3, BcCase::EN);
  int found = 0;
  for (int e = 0; e < m.num_edges(); ++e) {
    const EdgeGeometry g = m.edge_geometry(e);
    if (m.edge(e).on_boundary() && std::abs(g.midpoint.y()) < 1e-14) {
      ++found;
      EXPECT_NEAR(g.normal.x(), 0.0, 1e-15);
      EXPECT_NEAR(g.normal.y(), -1.0, 1e-15);
    }
  }
  EXPECT_EQ(found, 6);
}

TEST(EdgeGeometry, DiagonalOfUnitCell)
{
  const TriMesh m = build_mesh(1, BcCase::NN);
  int diagonals = 0;
  for (int e = 0; e < m.num_edges(); ++e) {
    const EdgeGeometry g = m.edge_geometry(e);
    if (std::abs(g.length - std::sqrt(2.0)) > 1e-12) continue;
    ++diagonals;
    const double cx = g.midpoint.x() < 1.0 ? 0.5 : 1.5;
    EXPECT_NEAR(g.midpoint.x(), cx, 1e-15);
    EXPECT_NEAR(g.midpoint.y(), 0.5, 1e-15);
    EXPECT_NEAR(g.normal.norm(), 1.0, 1e-15);
  }
  EXPECT_EQ(diagonals, 2);
}

TEST(EdgeGeometry, OutOfRange)
{
  const TriMesh m = build_mesh(1, BcCase::NN);
  EXPECT_THROW((void)m.edge_geometry(m.num_edges()), std::out_of_range);
  EXPECT_THROW((void)m.edge_geometry(-1), std::out_of_range);
  EXPECT_THROW((void)m.triangle_geometry(m.num_triangles()), std::out_of_range);
}

TEST(TriangleGeometry, UniformAreas)
{
  const TriMesh m = build_mesh(2, BcCase::NN);
  for (int t = 0; t < m.num_triangles(); ++t) EXPECT_NEAR(m.triangle_geometry(t).area, 0.125, 1e-15);
}

TEST(TriangleGeometry, ConstantFieldHasZeroNetFlux)
{
  const TriMesh m = build_mesh(3, BcCase::NN);
  const Vec2 c(0.3, -1.7);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const TriangleGeometry g = m.triangle_geometry(t);
    double flux = 0.0;
    for (int k = 0; k < 3; ++k) {
      const EdgeGeometry eg = m.edge_geometry(m.triangle(t).edges[static_cast<std::size_t>(k)]);
      flux += g.edge_signs[static_cast<std::size_t>(k)] * eg.length * c.dot(eg.normal);
    }
    EXPECT_NEAR(flux, 0.0, 1e-14);
  }
}

TEST(TriangleGeometry, OrientationSignsPointOutward)
{
  const TriMesh m = build_mesh(3, BcCase::EE);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const TriangleGeometry g = m.triangle_geometry(t);
    for (int k = 0; k < 3; ++k) {
      const EdgeGeometry eg = m.edge_geometry(m.triangle(t).edges[static_cast<std::size_t>(k)]);
      EXPECT_GT((g.edge_signs[static_cast<std::size_t>(k)] * eg.normal).dot(eg.midpoint - g.barycenter), 0.0);
    }
  }
}

TEST(TriangleGeometry, StokesAreaIsOne)
{
  const TriMesh m = build_mesh(5, BcCase::NN);
  double area = 0.0;
  for (const Triangle& t : m.triangles())
    if (t.domain == Subdomain::Stokes) area += t.area;
  EXPECT_NEAR(area, 1.0, 1e-13);
}

TEST(MeshProperty, EulerInterfaceAndAreaUpTo64)
{
  for (int n = 1; n <= 64; ++n) {
    const TriMesh m = build_mesh(n, BcCase::NN);
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles() + 1, 2) << "n=" << n;
    EXPECT_EQ(static_cast<int>(m.interface_edges().size()), n);
    double area = 0.0;
    for (const Triangle& t : m.triangles()) {
      EXPECT_GT(t.area, 0.0);
      area += t.area;
    }
    EXPECT_NEAR(area, 2.0, 1e-12);
  }
}

TEST(MeshProperty, EdgeAdjacency)
{
  const TriMesh m = build_mesh(6, BcCase::EN);
  std::vector<int> count(static_cast<std::size_t>(m.num_edges()), 0);
  for (const Triangle& t : m.triangles())
    for (int e : t.edges) ++count[static_cast<std::size_t>(e)];
  for (int e = 0; e < m.num_edges(); ++e)
    EXPECT_EQ(count[static_cast<std::size_t>(e)], m.edge(e).on_boundary() ? 1 : 2);
}

BoundaryTag expected_tag(BcCase c, const Vec2& mid)
{
  const bool stokes = mid.x() < 1.0;
  const bool vertical = std::abs(mid.x()) < 1e-14 || std::abs(mid.x() - 2.0) < 1e-14;
  if (stokes) {
    const bool natural = !vertical && stokes_has_natural(c);
    return natural ? BoundaryTag::StokesNatural : BoundaryTag::StokesEssential;
  }
  const bool natural = !vertical && darcy_has_natural(c);
  return natural ? BoundaryTag::DarcyNatural : BoundaryTag::DarcyEssential;
}

TEST(MeshProperty, BoundaryTagsFollowCaseTable)
{
  for (BcCase c : testing::kAllCases) {
    const TriMesh m = build_mesh(4, c);
    for (int e = 0; e < m.num_edges(); ++e) {
      const Edge& edge = m.edge(e);
      if (!edge.on_boundary()) {
        EXPECT_EQ(edge.tag, BoundaryTag::None);
        continue;
      }
      EXPECT_EQ(edge.tag, expected_tag(c, m.edge_geometry(e).midpoint)) << to_string(c) << " edge " << e;
    }
  }
  EXPECT_TRUE(stokes_has_natural(BcCase::NN));
  EXPECT_TRUE(darcy_has_natural(BcCase::NN));
  EXPECT_FALSE(stokes_has_natural(BcCase::EE));
  EXPECT_FALSE(darcy_has_natural(BcCase::EE));
  EXPECT_TRUE(stokes_has_natural(BcCase::NE));
  EXPECT_FALSE(darcy_has_natural(BcCase::NE));
  EXPECT_FALSE(stokes_has_natural(BcCase::EN));
  EXPECT_TRUE(darcy_has_natural(BcCase::EN));
}

TEST(BcCaseNames, RoundTripAndReject)
{
  for (BcCase c : testing::kAllCases) EXPECT_EQ(parse_bc_case(to_string(c)), c);
  EXPECT_THROW((void)parse_bc_case("XX"), std::invalid_argument);
}

}  // namespace
}  // namespace sdkit
