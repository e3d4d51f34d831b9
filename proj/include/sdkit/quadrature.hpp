#pragma once

#include <array>
#include <cmath>
#include <span>
#include <type_traits>

#include "sdkit/mesh.hpp"

namespace sdkit::quad {

struct TrianglePoint {
  std::array<double, 3> bary;  // barycentric coordinates
  double weight;               // sums to 1 over the rule
};

/// Symmetric 6-point rule, exact for polynomials of degree 4.
inline constexpr std::array<TrianglePoint, 6> kTriangle6 = {{
    {{0.108103018168070, 0.445948490915965, 0.445948490915965}, 0.223381589678011},
    {{0.445948490915965, 0.108103018168070, 0.445948490915965}, 0.223381589678011},
    {{0.445948490915965, 0.445948490915965, 0.108103018168070}, 0.223381589678011},
    {{0.816847572980459, 0.091576213509771, 0.091576213509771}, 0.109951743655322},
    {{0.091576213509771, 0.816847572980459, 0.091576213509771}, 0.109951743655322},
    {{0.091576213509771, 0.091576213509771, 0.816847572980459}, 0.109951743655322},
}};

struct LinePoint {
  double t;       // parameter in [0,1]
  double weight;  // sums to 1 over the rule
};

/// Gauss-Legendre rules mapped to [0,1].
inline constexpr std::array<LinePoint, 2> kGauss2 = {{
    {0.2113248654051871, 0.5},
    {0.7886751345948129, 0.5},
}};

inline constexpr std::array<LinePoint, 5> kGauss5 = {{
    {0.0469100770306680, 0.1184634425280945},
    {0.2307653449471585, 0.2393143352496832},
    {0.5, 0.2844444444444444},
    {0.7692346550528415, 0.2393143352496832},
    {0.9530899229693320, 0.1184634425280945},
}};

inline Vec2 map_point(const TriMesh& mesh, const Triangle& tri, const TrianglePoint& q)
{
  return q.bary[0] * mesh.vertex(tri.vertices[0]) + q.bary[1] * mesh.vertex(tri.vertices[1]) +
         q.bary[2] * mesh.vertex(tri.vertices[2]);
}

/// Integrates f over edge e (f receives the physical point).
template <class F, std::size_t N>
auto integrate_edge(const TriMesh& mesh, int e, const std::array<LinePoint, N>& rule, F&& f)
{
  const Edge& edge = mesh.edge(e);
  const Vec2& a = mesh.vertex(edge.vertices[0]);
  const Vec2& b = mesh.vertex(edge.vertices[1]);
  using R = std::decay_t<decltype(f(a))>;
  R sum = rule[0].weight * f(a + rule[0].t * (b - a));
  for (std::size_t i = 1; i < N; ++i) sum = sum + rule[i].weight * f(a + rule[i].t * (b - a));
  return R(sum * edge.length);
}

template <class F>
auto integrate_triangle(const TriMesh& mesh, int t, F&& f)
{
  const Triangle& tri = mesh.triangle(t);
  using R = std::decay_t<decltype(f(mesh.vertex(tri.vertices[0])))>;
  R sum = kTriangle6[0].weight * f(map_point(mesh, tri, kTriangle6[0]));
  for (std::size_t i = 1; i < kTriangle6.size(); ++i)
    sum = sum + kTriangle6[i].weight * f(map_point(mesh, tri, kTriangle6[i]));
  return R(sum * tri.area);
}

}  // namespace sdkit::quad
