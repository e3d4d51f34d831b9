#pragma once

#include <atomic>
#include <memory>

#include <Eigen/SparseCholesky>

#include "sdkit/amg.hpp"
#include "sdkit/assembly.hpp"
#include "sdkit/krylov.hpp"

namespace sdkit {

enum class PrecondMode { Exact, Inexact };

/// blockdiag((A_u + D_u)^{-1}, I_p^{-1}), with the velocity block either
/// factored (Exact) or approximated by an inner AMG-preconditioned GMRES
/// solve (Inexact). Immutable after construction apart from usage counters.
class BlockPreconditioner {
 public:
  [[nodiscard]] PrecondMode mode() const { return mode_; }
  [[nodiscard]] Vec apply(const Vec& r) const;
  [[nodiscard]] LinearMap as_map() const;
  [[nodiscard]] Vec apply_velocity(const Vec& r) const;

  [[nodiscard]] const UaAmg* amg() const { return amg_.get(); }
  /// Inner iterations summed over all applications (Inexact only).
  [[nodiscard]] long inner_iterations() const { return inner_iterations_.load(); }
  [[nodiscard]] long inner_failures() const { return inner_failures_.load(); }

  friend BlockPreconditioner build_exact_preconditioner(const BlockSystem& system);
  friend BlockPreconditioner build_inexact_preconditioner(const BlockSystem& system, double inner_tol, int inner_max_iter,
                                                          const AmgOptions& amg);

  BlockPreconditioner(BlockPreconditioner&& other) noexcept;

 private:
  BlockPreconditioner() = default;

  PrecondMode mode_ = PrecondMode::Exact;
  int nu_ = 0;
  Vec ip_inv_;
  std::shared_ptr<const SpMat> M_V_;
  std::shared_ptr<Eigen::SimplicialLLT<SpMat>> llt_;
  std::shared_ptr<UaAmg> amg_;
  double inner_tol_ = 1e-2;
  int inner_max_iter_ = 200;
  mutable std::atomic<long> inner_iterations_{0};
  mutable std::atomic<long> inner_failures_{0};
};

/// Throws std::runtime_error when A_u + D_u is not SPD.
[[nodiscard]] BlockPreconditioner build_exact_preconditioner(const BlockSystem& system);
[[nodiscard]] BlockPreconditioner build_inexact_preconditioner(const BlockSystem& system, double inner_tol = 1e-2,
                                                               int inner_max_iter = 200, const AmgOptions& amg = {});

/// Subtracts the area-weighted mean from the pressure part (the trailing
/// `areas.size()` entries) of a coupled solution vector.
[[nodiscard]] Vec project_pressure_mean(const Vec& solution, const Vec& areas);

/// Triangle areas of the mesh, in triangle order.
[[nodiscard]] Vec triangle_areas(const TriMesh& mesh);

struct SaddleSolve {
  Vec velocity;  // free DOFs
  Vec pressure;
  SolveReport report;
};

/// GMRES on the saddle system with the given preconditioner; for case EE the
/// pressure mean is removed afterwards. Inexact preconditioners force the
/// flexible variant.
[[nodiscard]] SaddleSolve solve_system(const BlockSystem& system, const BlockPreconditioner& precond,
                                       KrylovConfig config);

}  // namespace sdkit
