#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sdkit/assembly.hpp"

namespace sdkit {

/// Largest coupled system (velocity + pressure DOFs) handled by the dense
/// eigensolvers.
inline constexpr int kDenseCap = 6000;

struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending
  double kappa = 0.0;
  double kappa_eff = 0.0;
  /// Eigenvalues below the relative zero threshold.
  int discarded = 0;
  /// The isolated smallest-magnitude eigenvalue removed for kappa_eff (NE/EN).
  std::optional<double> lambda0;
  /// Largest |imaginary part| seen; zero for the symmetric solver.
  double max_imag = 0.0;
};

/// Spectrum of the symmetric-definite pencil (A, M). When `isolate_outlier`
/// is set, kappa_eff also drops the smallest-magnitude nonzero eigenvalue.
[[nodiscard]] SpectrumReport pencil_spectrum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M, bool isolate_outlier);

/// Spectrum of the saddle matrix preconditioned by blockdiag(M_V, I_p).
/// Throws std::length_error above kDenseCap.
[[nodiscard]] SpectrumReport preconditioned_spectrum(const BlockSystem& system);

/// sqrt of the smallest nonzero eigenvalue of B M_V^{-1} B^T q = lambda I_p q.
/// Throws std::length_error above kDenseCap.
[[nodiscard]] double infsup_constant(const BlockSystem& system);

struct ErrorNorms {
  double u_stokes = 0.0;
  double p_stokes = 0.0;
  double u_darcy = 0.0;
  double p_darcy = 0.0;
};

/// L2 errors of the discrete solution (free velocity DOFs and pressures)
/// against the manufactured solution. For case EE both pressures are
/// compared after matching the global means.
[[nodiscard]] ErrorNorms error_norms(const BlockSystem& system, const Vec& velocity, const Vec& pressure);

/// L2 errors of a full velocity field and pressure vector.
[[nodiscard]] ErrorNorms error_norms_full(const CoupledSpace& space, const Vec& full_velocity, const Vec& pressure,
                                          bool match_pressure_mean);

/// log2(e_{k-1}/e_k) for consecutive dyadic levels; first entry absent.
[[nodiscard]] std::vector<std::optional<double>> eoc(const std::vector<double>& errors);
/// Least-squares slope of -log(e) versus log(n).
[[nodiscard]] double eoc_least_squares(const std::vector<int>& n, const std::vector<double>& errors);

}  // namespace sdkit
