#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace sdkit {

using Vec2 = Eigen::Vector2d;

/// Which outer boundary portions carry essential (flux) conditions.
///
/// The first letter refers to the Stokes block, the second to the Darcy
/// block: N means the subdomain has a natural portion (traction resp.
/// pressure), E means its whole outer boundary is essential. The Stokes
/// left edge x = 0 and the Darcy right edge x = 2 are essential in every
/// case; only the top/bottom edges switch.
enum class BcCase { NN, EE, NE, EN };

enum class Subdomain : std::uint8_t { Stokes, Darcy };

enum class BoundaryTag : std::uint8_t {
  None,  // interior or interface edge
  StokesEssential,
  StokesNatural,
  DarcyEssential,
  DarcyNatural
};

std::string_view to_string(BcCase c);
BcCase parse_bc_case(std::string_view s);  // throws std::invalid_argument

bool stokes_has_natural(BcCase c);
bool darcy_has_natural(BcCase c);

struct Edge {
  std::array<int, 2> vertices{};
  /// Adjacent triangles; triangles[1] == -1 on the outer boundary.
  std::array<int, 2> triangles{-1, -1};
  /// Fixed unit normal n_e: outward on the boundary, n_S = (1,0) on the
  /// interface.
  Vec2 normal = Vec2::Zero();
  double length = 0.0;
  BoundaryTag tag = BoundaryTag::None;
  bool interface = false;

  [[nodiscard]] bool on_boundary() const { return triangles[1] < 0; }
};

struct Triangle {
  /// Counterclockwise vertex indices.
  std::array<int, 3> vertices{};
  /// Local edge k is opposite local vertex k.
  std::array<int, 3> edges{};
  /// +1 if the stored normal of edges[k] points out of this triangle.
  std::array<int, 3> edge_signs{};
  Subdomain domain = Subdomain::Stokes;
  double area = 0.0;
};

struct EdgeGeometry {
  double length;
  Vec2 normal;
  Vec2 midpoint;
};

struct TriangleGeometry {
  double area;
  Vec2 barycenter;
  std::array<int, 3> edge_signs;
};

/// Structured conforming triangulation of [0,2]x[0,1] split into the
/// Stokes block [0,1]^2 and the Darcy block [1,2]x[0,1].
///
/// Immutable after construction.
class TriMesh {
 public:
  TriMesh(int n, BcCase bc);

  [[nodiscard]] int subdivisions() const { return n_; }
  [[nodiscard]] BcCase bc_case() const { return bc_; }
  /// Largest triangle diameter, sqrt(2)/n.
  [[nodiscard]] double h() const;
  /// Grid spacing 1/n, the label used in result tables.
  [[nodiscard]] double h_label() const { return 1.0 / n_; }

  [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Triangle>& triangles() const { return triangles_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<int>& interface_edges() const { return interface_edges_; }

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_triangles() const { return static_cast<int>(triangles_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }

  [[nodiscard]] const Vec2& vertex(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  [[nodiscard]] const Triangle& triangle(int t) const { return triangles_.at(static_cast<std::size_t>(t)); }
  [[nodiscard]] const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }

  /// Throws std::out_of_range for invalid indices.
  [[nodiscard]] EdgeGeometry edge_geometry(int e) const;
  [[nodiscard]] TriangleGeometry triangle_geometry(int t) const;

  /// Triangles sharing a vertex, in increasing index order.
  [[nodiscard]] const std::vector<int>& vertex_triangles(int v) const {
    return vertex_triangles_.at(static_cast<std::size_t>(v));
  }

  /// The Stokes-side triangle of an interface edge.
  [[nodiscard]] int stokes_neighbor(int e) const;
  [[nodiscard]] int darcy_neighbor(int e) const;

 private:
  int n_;
  BcCase bc_;
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<int> interface_edges_;
  std::vector<std::vector<int>> vertex_triangles_;
};

/// Throws std::invalid_argument for n < 1.
TriMesh build_mesh(int n, BcCase bc);

}  // namespace sdkit
