#pragma once

// Helpers shared by the unit tests and the acceptance runner. Everything
// here recomputes quantities from first principles (quadrature, dense
// linear algebra) so that it can serve as an oracle for the library.

#include <memory>
#include <random>

#include <Eigen/Dense>

#include "sdkit/assembly.hpp"
#include "sdkit/basis.hpp"
#include "sdkit/quadrature.hpp"

namespace sdkit::testing {

inline constexpr BcCase kAllCases[] = {BcCase::NN, BcCase::EE, BcCase::NE, BcCase::EN};
inline constexpr FeKind kAllKinds[] = {FeKind::HdivConforming, FeKind::Nonconforming};

inline std::shared_ptr<const CoupledSpace> make_space(int n, BcCase c, FeKind k)
{
  auto mesh = std::make_shared<const TriMesh>(build_mesh(n, c));
  return std::make_shared<const CoupledSpace>(build_space(mesh, k));
}

inline BlockSystem make_system(int n, BcCase c, FeKind k, double mu = 1.0, double K = 1.0)
{
  PhysicalParams p;
  p.mu = mu;
  p.K = K;
  return assemble_system(make_space(n, c, k), p);
}

inline Vec random_vector(Eigen::Index size, unsigned seed)
{
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = dist(gen);
  return v;
}

/// Net flux of a full velocity field out of triangle t, from 2-point Gauss
/// quadrature of the field trace on each edge.
inline double outward_flux(const CoupledSpace& space, const Vec& full, int t)
{
  const TriMesh& mesh = space.mesh();
  const LocalFrame f(mesh, t);
  const Triangle& tri = mesh.triangle(t);
  double flux = 0.0;
  for (int k = 0; k < 3; ++k) {
    const int e = tri.edges[static_cast<std::size_t>(k)];
    const Vec2 n = tri.edge_signs[static_cast<std::size_t>(k)] * mesh.edge(e).normal;
    flux += quad::integrate_edge(mesh, e, quad::kGauss2,
                                 [&](const Vec2& x) { return field_value(space, f, t, full, x).dot(n); });
  }
  return flux;
}

/// Full coefficient vector of a vector field: nodal P1 values (Stokes RT0
/// part zero) and Darcy RT0 fluxes for the conforming pair, midpoint values
/// for CR. Exact for affine fields.
template <class F>
Vec interpolate_full(const CoupledSpace& space, F&& field)
{
  const TriMesh& mesh = space.mesh();
  Vec full = Vec::Zero(space.full_velocity_size());
  if (space.kind() == FeKind::HdivConforming) {
    for (int v = 0; v < mesh.num_vertices(); ++v)
      for (int c = 0; c < 2; ++c)
        if (space.p1_dof(v, c) >= 0) full(space.p1_dof(v, c)) = field(mesh.vertex(v))(c);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      if (mesh.triangle(t).domain != Subdomain::Darcy) continue;
      for (const LocalDof& d : space.element_dofs(t)) {
        const int e = mesh.triangle(t).edges[static_cast<std::size_t>(d.local)];
        const Vec2 n = mesh.edge(e).normal;
        full(d.index) = d.orientation * quad::integrate_edge(mesh, e, quad::kGauss5,
                                                             [&](const Vec2& x) { return Vec2(field(x)).dot(n); });
      }
    }
  } else {
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Vec2 v = field(mesh.edge_geometry(e).midpoint);
      for (int c = 0; c < 2; ++c) {
        if (space.stokes_edge_dof(e, c) >= 0) full(space.stokes_edge_dof(e, c)) = v(c);
        if (space.darcy_edge_dof(e, c) >= 0) full(space.darcy_edge_dof(e, c)) = v(c);
      }
    }
  }
  return full;
}

/// Orthonormal basis of ker(B) (dense).
inline Eigen::MatrixXd kernel_basis(const SpMat& B)
{
  const Eigen::MatrixXd Bd(B);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bd, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double tol = 1e-10 * (s.size() > 0 ? s(0) : 1.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > tol) ++rank;
  return svd.matrixV().rightCols(Bd.cols() - rank);
}

}  // namespace sdkit::testing
