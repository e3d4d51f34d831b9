#pragma once

#include "sdkit/mesh.hpp"

namespace sdkit {

using Mat2 = Eigen::Matrix2d;

/// Closed-form coupled solution on [0,1]^2 u [1,2]x[0,1]:
///
///   u_S = ((e^x - e) cos(pi y), -e^x sin(pi y) / pi),   p_S = 2 e^x cos(pi y)
///   u_D = (-(e^x - e) cos(pi y), pi (e^x - x e) sin(pi y)),  p_D = (e^x - x e) cos(pi y)
///
/// together with the data it induces for given (mu, K, alpha_BJS). The
/// interface residuals r_n, r_tau measure how far the pair is from
/// satisfying the normal-stress balance and the BJS law on x = 1; they are
/// moved to the right-hand side so that the discrete problem is consistent.
class ManufacturedSolution {
 public:
  ManufacturedSolution(double mu, double K, double alpha_bjs);

  [[nodiscard]] double mu() const { return mu_; }
  [[nodiscard]] double K() const { return K_; }
  /// beta_tau = alpha_BJS * mu / sqrt(mu K).
  [[nodiscard]] double beta_tau() const { return beta_; }

  [[nodiscard]] static Vec2 u_stokes(const Vec2& x);
  [[nodiscard]] static double p_stokes(const Vec2& x);
  [[nodiscard]] static Mat2 grad_u_stokes(const Vec2& x);
  [[nodiscard]] static Vec2 u_darcy(const Vec2& x);
  [[nodiscard]] static double p_darcy(const Vec2& x);

  /// sigma(u_S, p_S) = 2 mu eps(u_S) - p_S I.
  [[nodiscard]] Mat2 stress(const Vec2& x) const;
  /// f_S = -div sigma.
  [[nodiscard]] Vec2 f_stokes(const Vec2& x) const;
  /// f_D = K^{-1} u_D + grad p_D.
  [[nodiscard]] Vec2 f_darcy(const Vec2& x) const;
  /// g_D = div u_D.
  [[nodiscard]] static double g_darcy(const Vec2& x);

  /// On the interface: r_n = -sigma n.n - p_D and r_tau = -sigma n.tau - beta u_S.tau,
  /// with n = (1,0), tau = (0,1).
  [[nodiscard]] double r_normal(double y) const;
  [[nodiscard]] double r_tangential(double y) const;

 private:
  double mu_;
  double K_;
  double alpha_;
  double beta_;
};

/// Point-evaluation entry used by the CLI/tests; the selector names one of
/// u_S, p_S, u_D, p_D, f_S, f_D, g_D. Throws std::invalid_argument when the
/// point lies outside the matching subdomain or the selector is unknown.
enum class ExactField { VelocityStokes, PressureStokes, VelocityDarcy, PressureDarcy, ForceStokes, ForceDarcy, SourceDarcy };

[[nodiscard]] Vec2 exact_solution_eval(const ManufacturedSolution& sol, const Vec2& x, ExactField field);

}  // namespace sdkit
