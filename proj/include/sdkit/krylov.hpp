#pragma once

#include <functional>
#include <vector>

#include "sdkit/spaces.hpp"

namespace sdkit {

/// y = Op(x).
using LinearMap = std::function<Vec(const Vec&)>;

enum class PrecondSide { Left, Right };

struct KrylovConfig {
  double tol = 1e-6;
  int max_iter = 1000;
  /// Right preconditioning minimizes the residual the stopping test
  /// measures; left preconditioning minimizes M^{-1}(b - Ax) instead and
  /// typically needs a few extra steps to meet the same test.
  PrecondSide side = PrecondSide::Right;
  /// Store the preconditioned directions (FGMRES); required when the
  /// preconditioner is itself iterative. Implies right preconditioning.
  bool flexible = false;

  /// Throws std::invalid_argument for tol <= 0 or max_iter < 1.
  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  /// Norm of the residual minimized by the Krylov method, starting with the
  /// initial one: preconditioned for left GMRES, unpreconditioned otherwise.
  std::vector<double> residual_history;
  /// ||b - A x_k|| for every iterate, starting with ||b||.
  std::vector<double> true_residual_history;
  bool converged = false;
  bool breakdown = false;
  double relative_residual = 0.0;
  double wall_time = 0.0;  // seconds
};

struct KrylovResult {
  Vec x;
  SolveReport report;
};

/// Full (non-restarted) GMRES from a zero initial guess. Stops when
/// ||b - A x|| <= tol ||b||. `precond` may be empty (identity).
[[nodiscard]] KrylovResult gmres(const LinearMap& A, const Vec& b, const LinearMap& precond, const KrylovConfig& config);

[[nodiscard]] LinearMap as_map(const SpMat& A);

}  // namespace sdkit
