#include "sdkit/mesh.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace sdkit {

std::string_view to_string(BcCase c)
{
  switch (c) {
    case BcCase::NN: return "NN";
    case BcCase::EE: return "EE";
    case BcCase::NE: return "NE";
    case BcCase::EN: return "EN";
  }
  return "??";
}

BcCase parse_bc_case(std::string_view s)
{
  if (s == "NN") return BcCase::NN;
  if (s == "EE") return BcCase::EE;
  if (s == "NE") return BcCase::NE;
  if (s == "EN") return BcCase::EN;
  throw std::invalid_argument("unknown boundary-condition case '" + std::string(s) + "'");
}

bool stokes_has_natural(BcCase c) { return c == BcCase::NN || c == BcCase::NE; }
bool darcy_has_natural(BcCase c) { return c == BcCase::NN || c == BcCase::EN; }

namespace {

constexpr double kGeomTol = 1e-12;

BoundaryTag classify_boundary(const Vec2& mid, BcCase bc)
{
  if (std::abs(mid.x()) < kGeomTol) return BoundaryTag::StokesEssential;
  if (std::abs(mid.x() - 2.0) < kGeomTol) return BoundaryTag::DarcyEssential;
  // top or bottom edge
  if (mid.x() < 1.0) {
    return stokes_has_natural(bc) ? BoundaryTag::StokesNatural : BoundaryTag::StokesEssential;
  }
  return darcy_has_natural(bc) ? BoundaryTag::DarcyNatural : BoundaryTag::DarcyEssential;
}

}  // namespace

TriMesh::TriMesh(int n, BcCase bc) : n_(n), bc_(bc)
{
  if (n < 1) throw std::invalid_argument("build_mesh: n must be >= 1");

  const int nx = 2 * n;
  const int ny = n;
  const int stride = nx + 1;
  const double step = 1.0 / n;

  vertices_.reserve(static_cast<std::size_t>(stride * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices_.emplace_back(i * step, j * step);

  triangles_.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = j * stride + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + stride;
      const int v11 = v01 + 1;
      const Subdomain dom = i < n ? Subdomain::Stokes : Subdomain::Darcy;
      Triangle lower;
      lower.vertices = {v00, v10, v11};
      lower.domain = dom;
      Triangle upper;
      upper.vertices = {v00, v11, v01};
      upper.domain = dom;
      triangles_.push_back(lower);
      triangles_.push_back(upper);
    }
  }

  std::map<std::pair<int, int>, int> edge_index;
  for (int t = 0; t < num_triangles(); ++t) {
    Triangle& tri = triangles_[static_cast<std::size_t>(t)];
    const Vec2& p0 = vertices_[static_cast<std::size_t>(tri.vertices[0])];
    const Vec2& p1 = vertices_[static_cast<std::size_t>(tri.vertices[1])];
    const Vec2& p2 = vertices_[static_cast<std::size_t>(tri.vertices[2])];
    tri.area = 0.5 * ((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());

    for (int k = 0; k < 3; ++k) {
      int a = tri.vertices[static_cast<std::size_t>((k + 1) % 3)];
      int b = tri.vertices[static_cast<std::size_t>((k + 2) % 3)];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_index.try_emplace({a, b}, num_edges());
      if (inserted) {
        Edge e;
        e.vertices = {a, b};
        e.triangles = {t, -1};
        const Vec2 tangent = vertices_[static_cast<std::size_t>(b)] - vertices_[static_cast<std::size_t>(a)];
        e.length = tangent.norm();
        e.normal = Vec2(tangent.y(), -tangent.x()) / e.length;
        edges_.push_back(e);
      } else {
        edges_[static_cast<std::size_t>(it->second)].triangles[1] = t;
      }
      tri.edges[static_cast<std::size_t>(k)] = it->second;
    }
  }

  for (int e = 0; e < num_edges(); ++e) {
    Edge& edge = edges_[static_cast<std::size_t>(e)];
    const Vec2 mid = 0.5 * (vertex(edge.vertices[0]) + vertex(edge.vertices[1]));
    if (edge.on_boundary()) {
      const Triangle& tri = triangles_[static_cast<std::size_t>(edge.triangles[0])];
      const Vec2 bary = (vertex(tri.vertices[0]) + vertex(tri.vertices[1]) + vertex(tri.vertices[2])) / 3.0;
      if (edge.normal.dot(mid - bary) < 0.0) edge.normal = -edge.normal;
      edge.tag = classify_boundary(mid, bc);
    } else {
      const Subdomain d0 = triangles_[static_cast<std::size_t>(edge.triangles[0])].domain;
      const Subdomain d1 = triangles_[static_cast<std::size_t>(edge.triangles[1])].domain;
      if (d0 != d1) {
        edge.interface = true;
        edge.normal = Vec2(1.0, 0.0);
        interface_edges_.push_back(e);
      }
    }
  }

  for (auto& tri : triangles_) {
    const Vec2 bary = (vertex(tri.vertices[0]) + vertex(tri.vertices[1]) + vertex(tri.vertices[2])) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const Edge& edge = edges_[static_cast<std::size_t>(tri.edges[static_cast<std::size_t>(k)])];
      const Vec2 mid = 0.5 * (vertex(edge.vertices[0]) + vertex(edge.vertices[1]));
      tri.edge_signs[static_cast<std::size_t>(k)] = edge.normal.dot(mid - bary) > 0.0 ? 1 : -1;
    }
  }

  vertex_triangles_.assign(vertices_.size(), {});
  for (int t = 0; t < num_triangles(); ++t)
    for (int v : triangles_[static_cast<std::size_t>(t)].vertices)
      vertex_triangles_[static_cast<std::size_t>(v)].push_back(t);
}

double TriMesh::h() const { return std::sqrt(2.0) / n_; }

EdgeGeometry TriMesh::edge_geometry(int e) const
{
  if (e < 0 || e >= num_edges()) throw std::out_of_range("edge_geometry: edge index out of range");
  const Edge& edge = edges_[static_cast<std::size_t>(e)];
  return {edge.length, edge.normal, 0.5 * (vertex(edge.vertices[0]) + vertex(edge.vertices[1]))};
}

TriangleGeometry TriMesh::triangle_geometry(int t) const
{
  if (t < 0 || t >= num_triangles()) throw std::out_of_range("triangle_geometry: triangle index out of range");
  const Triangle& tri = triangles_[static_cast<std::size_t>(t)];
  const Vec2 bary = (vertex(tri.vertices[0]) + vertex(tri.vertices[1]) + vertex(tri.vertices[2])) / 3.0;
  return {tri.area, bary, tri.edge_signs};
}

int TriMesh::stokes_neighbor(int e) const
{
  const Edge& edge = this->edge(e);
  if (!edge.interface) throw std::invalid_argument("stokes_neighbor: not an interface edge");
  return triangle(edge.triangles[0]).domain == Subdomain::Stokes ? edge.triangles[0] : edge.triangles[1];
}

int TriMesh::darcy_neighbor(int e) const
{
  const Edge& edge = this->edge(e);
  if (!edge.interface) throw std::invalid_argument("darcy_neighbor: not an interface edge");
  return triangle(edge.triangles[0]).domain == Subdomain::Darcy ? edge.triangles[0] : edge.triangles[1];
}

TriMesh build_mesh(int n, BcCase bc) { return TriMesh(n, bc); }

}  // namespace sdkit
