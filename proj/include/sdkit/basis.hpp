#pragma once

#include <Eigen/Core>

#include "sdkit/mesh.hpp"
#include "sdkit/spaces.hpp"

namespace sdkit {

using Mat2 = Eigen::Matrix2d;

/// Geometry of one triangle needed to evaluate the local shape functions.
struct LocalFrame {
  std::array<Vec2, 3> vertices;
  std::array<Vec2, 3> grad_lambda;  // gradients of the barycentric coordinates
  std::array<int, 3> edge_signs;
  double area;

  LocalFrame(const TriMesh& mesh, int t);

  [[nodiscard]] double lambda(int k, const Vec2& x) const
  {
    return 1.0 + grad_lambda[static_cast<std::size_t>(k)].dot(x - vertices[static_cast<std::size_t>(k)]);
  }
};

/// Value of a velocity basis function at a point of its triangle.
///  P1:  lambda_k e_c
///  RT0: orientation * sign_k * (x - p_k) / (2|T|), unit flux through edge k
///  CR:  (1 - 2 lambda_k) e_c, equal to 1 at the midpoint of edge k
[[nodiscard]] Vec2 basis_value(const LocalFrame& f, const LocalDof& d, const Vec2& x);

/// Gradient (row c = gradient of component c); constant on the triangle.
[[nodiscard]] Mat2 basis_gradient(const LocalFrame& f, const LocalDof& d);

[[nodiscard]] inline double basis_divergence(const LocalFrame& f, const LocalDof& d)
{
  return basis_gradient(f, d).trace();
}

/// Evaluates a full velocity field on triangle t.
[[nodiscard]] Vec2 field_value(const CoupledSpace& space, const LocalFrame& f, int t, const Vec& full, const Vec2& x);

}  // namespace sdkit
