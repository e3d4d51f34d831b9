#pragma once

#include <functional>
#include <memory>

#include "sdkit/manufactured.hpp"
#include "sdkit/spaces.hpp"

namespace sdkit {

/// Material and discretization parameters.
struct PhysicalParams {
  double mu = 1.0;
  double K = 1.0;
  double alpha_bjs = 1.0;
  double omega_S = 100.0;
  double omega_D = 1.0;
  double alpha_T = 5.0;
  /// Sign of the symmetrizing interface term; fixed.
  static constexpr double gamma = 1.0;
  double gamma_prime = 1.0;
  double jump_penalty = 1.0;

  /// alpha_BJS / sqrt(mu K).
  [[nodiscard]] double beta_tilde() const;
  /// Throws std::invalid_argument when mu, K <= 0 or a weight is below 1.
  void validate() const;
};

// Full-field matrices below are indexed by the full velocity DOFs of the
// space (before the extension C is applied).

/// a_{S,h} for the (P1 + RT0) Stokes velocity. Throws for the wrong kind.
[[nodiscard]] SpMat assemble_stokes_conforming(const CoupledSpace& space, const PhysicalParams& params);
/// a_{S,h} for the CR Stokes velocity. Throws for the wrong kind.
[[nodiscard]] SpMat assemble_stokes_nonconforming(const CoupledSpace& space, const PhysicalParams& params);
/// a_{D,h}: velocity mass on the Darcy block, plus the normal-jump penalty for CR.
[[nodiscard]] SpMat assemble_darcy(const CoupledSpace& space, const PhysicalParams& params);
/// B_full(T, i) = -int_T div phi_i.
[[nodiscard]] SpMat assemble_divergence(const CoupledSpace& space);
/// Diagonal of I_p: |T| / (omega_S mu) on Stokes triangles, K |T| / omega_D on Darcy ones.
[[nodiscard]] Vec assemble_pressure_norm(const TriMesh& mesh, const PhysicalParams& params);
/// D_u = B^T I_p^{-1} B. Throws on a dimension mismatch.
[[nodiscard]] SpMat assemble_grad_div(const SpMat& B, const Vec& pressure_norm);

/// Edge fluxes int_e v.n_e (2-point Gauss) of an evaluable field, one per mesh edge.
[[nodiscard]] Vec rt_interpolant(const TriMesh& mesh, const std::function<Vec2(const Vec2&)>& field);
/// Edge fluxes of the Stokes P1/CR part of a full coefficient vector, taken
/// from the Stokes-side trace; zero on edges outside the Stokes block.
[[nodiscard]] Vec rt_interpolant(const CoupledSpace& space, const Vec& full);
/// Evaluates the RT0 field with the given edge fluxes on triangle t.
[[nodiscard]] Vec2 rt_field_value(const TriMesh& mesh, const Vec& fluxes, int t, const Vec2& x);

struct RhsVectors {
  Vec f_u;   // free velocity
  Vec g_p;   // pressure
  Vec lift;  // full velocity field carrying the essential boundary data
};

/// Right-hand sides for the manufactured solution. Essential data are lifted
/// into `lift`; the discrete velocity is expand(x) + lift.
[[nodiscard]] RhsVectors assemble_rhs(const CoupledSpace& space, const PhysicalParams& params,
                                      const ManufacturedSolution& exact);

/// All blocks over the free velocity DOFs.
struct BlockSystem {
  std::shared_ptr<const CoupledSpace> space;
  PhysicalParams params;
  SpMat A_full;  // mu a_S + K^{-1} a_D over full DOFs
  SpMat B_full;
  SpMat A_u;
  SpMat B;
  SpMat D_u;
  Vec I_p;  // diagonal
  SpMat M_V;
  Vec f_u;
  Vec g_p;
  Vec lift;

  [[nodiscard]] int velocity_size() const { return static_cast<int>(A_u.rows()); }
  [[nodiscard]] int pressure_size() const { return static_cast<int>(B.rows()); }
  [[nodiscard]] int size() const { return velocity_size() + pressure_size(); }
  /// [[A_u, B^T], [B, 0]].
  [[nodiscard]] SpMat saddle_matrix() const;
  /// [f_u; g_p].
  [[nodiscard]] Vec rhs() const;
};

/// Assembles every block and the manufactured right-hand side.
[[nodiscard]] BlockSystem assemble_system(std::shared_ptr<const CoupledSpace> space, const PhysicalParams& params);

}  // namespace sdkit
