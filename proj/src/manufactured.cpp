#include "sdkit/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdkit {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr double kTol = 1e-12;
}  // namespace

ManufacturedSolution::ManufacturedSolution(double mu, double K, double alpha_bjs)
    : mu_(mu), K_(K), alpha_(alpha_bjs)
{
  if (!(mu > 0.0) || !(K > 0.0)) throw std::invalid_argument("ManufacturedSolution: mu and K must be positive");
  beta_ = alpha_ * mu_ / std::sqrt(mu_ * K_);
}

Vec2 ManufacturedSolution::u_stokes(const Vec2& x)
{
  const double ex = std::exp(x.x());
  return {(ex - kE) * std::cos(kPi * x.y()), -ex * std::sin(kPi * x.y()) / kPi};
}

double ManufacturedSolution::p_stokes(const Vec2& x) { return 2.0 * std::exp(x.x()) * std::cos(kPi * x.y()); }

Mat2 ManufacturedSolution::grad_u_stokes(const Vec2& x)
{
  const double ex = std::exp(x.x());
  const double c = std::cos(kPi * x.y());
  const double s = std::sin(kPi * x.y());
  Mat2 g;
  g << ex * c, -kPi * (ex - kE) * s,  //
      -ex * s / kPi, -ex * c;
  return g;
}

Vec2 ManufacturedSolution::u_darcy(const Vec2& x)
{
  const double ex = std::exp(x.x());
  return {-(ex - kE) * std::cos(kPi * x.y()), kPi * (ex - x.x() * kE) * std::sin(kPi * x.y())};
}

double ManufacturedSolution::p_darcy(const Vec2& x)
{
  return (std::exp(x.x()) - x.x() * kE) * std::cos(kPi * x.y());
}

Mat2 ManufacturedSolution::stress(const Vec2& x) const
{
  const Mat2 g = grad_u_stokes(x);
  return mu_ * (g + g.transpose()) - p_stokes(x) * Mat2::Identity();
}

Vec2 ManufacturedSolution::f_stokes(const Vec2& x) const
{
  // u_S is divergence free, so -div sigma = -mu Lap u + grad p.
  const double ex = std::exp(x.x());
  const double c = std::cos(kPi * x.y());
  const double s = std::sin(kPi * x.y());
  const Vec2 lap(ex * c - kPi * kPi * (ex - kE) * c, -ex * s / kPi + kPi * ex * s);
  const Vec2 grad_p(2.0 * ex * c, -2.0 * kPi * ex * s);
  return -mu_ * lap + grad_p;
}

Vec2 ManufacturedSolution::f_darcy(const Vec2& x) const
{
  const double ex = std::exp(x.x());
  const double c = std::cos(kPi * x.y());
  const double s = std::sin(kPi * x.y());
  const Vec2 grad_p((ex - kE) * c, -kPi * (ex - x.x() * kE) * s);
  return u_darcy(x) / K_ + grad_p;
}

double ManufacturedSolution::g_darcy(const Vec2& x)
{
  const double ex = std::exp(x.x());
  return std::cos(kPi * x.y()) * (kPi * kPi * (ex - x.x() * kE) - ex);
}

double ManufacturedSolution::r_normal(double y) const
{
  const Vec2 x(1.0, y);
  return -stress(x)(0, 0) - p_darcy(x);
}

double ManufacturedSolution::r_tangential(double y) const
{
  const Vec2 x(1.0, y);
  return -stress(x)(1, 0) - beta_ * u_stokes(x).y();
}

Vec2 exact_solution_eval(const ManufacturedSolution& sol, const Vec2& x, ExactField field)
{
  const bool in_stokes = x.x() >= -kTol && x.x() <= 1.0 + kTol && x.y() >= -kTol && x.y() <= 1.0 + kTol;
  const bool in_darcy = x.x() >= 1.0 - kTol && x.x() <= 2.0 + kTol && x.y() >= -kTol && x.y() <= 1.0 + kTol;
  auto need = [](bool ok) {
    if (!ok) throw std::invalid_argument("exact_solution_eval: point outside the field's subdomain");
  };
  switch (field) {
    case ExactField::VelocityStokes: need(in_stokes); return ManufacturedSolution::u_stokes(x);
    case ExactField::PressureStokes: need(in_stokes); return {ManufacturedSolution::p_stokes(x), 0.0};
    case ExactField::VelocityDarcy: need(in_darcy); return ManufacturedSolution::u_darcy(x);
    case ExactField::PressureDarcy: need(in_darcy); return {ManufacturedSolution::p_darcy(x), 0.0};
    case ExactField::ForceStokes: need(in_stokes); return sol.f_stokes(x);
    case ExactField::ForceDarcy: need(in_darcy); return sol.f_darcy(x);
    case ExactField::SourceDarcy: need(in_darcy); return {ManufacturedSolution::g_darcy(x), 0.0};
  }
  throw std::invalid_argument("exact_solution_eval: unknown field");
}

}  // namespace sdkit
