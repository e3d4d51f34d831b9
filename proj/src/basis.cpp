#include "sdkit/basis.hpp"

namespace sdkit {

LocalFrame::LocalFrame(const TriMesh& mesh, int t)
{
  const Triangle& tri = mesh.triangle(t);
  for (std::size_t k = 0; k < 3; ++k) vertices[k] = mesh.vertex(tri.vertices[k]);
  area = tri.area;
  edge_signs = tri.edge_signs;
  for (std::size_t k = 0; k < 3; ++k) {
    const Vec2& a = vertices[(k + 1) % 3];
    const Vec2& b = vertices[(k + 2) % 3];
    grad_lambda[k] = Vec2(a.y() - b.y(), b.x() - a.x()) / (2.0 * area);
  }
}

Vec2 basis_value(const LocalFrame& f, const LocalDof& d, const Vec2& x)
{
  Vec2 v = Vec2::Zero();
  switch (d.type) {
    case BasisType::P1:
      v(d.component) = f.lambda(d.local, x);
      break;
    case BasisType::CR:
      v(d.component) = 1.0 - 2.0 * f.lambda(d.local, x);
      break;
    case BasisType::RT0:
      v = d.orientation * f.edge_signs[static_cast<std::size_t>(d.local)] *
          (x - f.vertices[static_cast<std::size_t>(d.local)]) / (2.0 * f.area);
      break;
  }
  return v;
}

Mat2 basis_gradient(const LocalFrame& f, const LocalDof& d)
{
  Mat2 g = Mat2::Zero();
  switch (d.type) {
    case BasisType::P1:
      g.row(d.component) = f.grad_lambda[static_cast<std::size_t>(d.local)].transpose();
      break;
    case BasisType::CR:
      g.row(d.component) = -2.0 * f.grad_lambda[static_cast<std::size_t>(d.local)].transpose();
      break;
    case BasisType::RT0:
      g = Mat2::Identity() * (d.orientation * f.edge_signs[static_cast<std::size_t>(d.local)] / (2.0 * f.area));
      break;
  }
  return g;
}

Vec2 field_value(const CoupledSpace& space, const LocalFrame& f, int t, const Vec& full, const Vec2& x)
{
  Vec2 v = Vec2::Zero();
  for (const LocalDof& d : space.element_dofs(t)) v += full(d.index) * basis_value(f, d, x);
  return v;
}

}  // namespace sdkit
