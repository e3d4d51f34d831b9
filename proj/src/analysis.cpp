#include "sdkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

#include "sdkit/basis.hpp"
#include "sdkit/quadrature.hpp"

namespace sdkit {

namespace {

void check_cap(int size)
{
  if (size > kDenseCap)
    throw std::length_error("dense eigensolve needs " + std::to_string(size) + " DOFs, cap is " +
                            std::to_string(kDenseCap) + "; reduce n");
}

}  // namespace

SpectrumReport pencil_spectrum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M, bool isolate_outlier)
{
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows() || A.rows() == 0)
    throw std::invalid_argument("pencil_spectrum: dimension mismatch");
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("pencil_spectrum: eigensolver failed");
  SpectrumReport rep;
  const Vec& ev = es.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  const double amax = ev.cwiseAbs().maxCoeff();
  std::vector<double> mags;
  for (double l : rep.eigenvalues) {
    if (std::abs(l) > 1e-10 * amax) mags.push_back(std::abs(l));
    else ++rep.discarded;
  }
  if (mags.empty()) throw std::runtime_error("pencil_spectrum: all eigenvalues vanish");
  std::sort(mags.begin(), mags.end());
  rep.kappa = mags.back() / mags.front();
  rep.kappa_eff = rep.kappa;
  if (isolate_outlier && mags.size() >= 2) {
    // recover the signed value of the removed eigenvalue
    for (double l : rep.eigenvalues)
      if (std::abs(l) == mags.front()) {
        rep.lambda0 = l;
        break;
      }
    rep.kappa_eff = mags.back() / mags[1];
  }
  return rep;
}

SpectrumReport preconditioned_spectrum(const BlockSystem& system)
{
  const int nu = system.velocity_size();
  const int n = system.size();
  check_cap(n);
  const Eigen::MatrixXd A(system.saddle_matrix());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  M.topLeftCorner(nu, nu) = Eigen::MatrixXd(system.M_V);
  M.bottomRightCorner(n - nu, n - nu) = system.I_p.asDiagonal();
  const BcCase c = system.space->bc_case();
  return pencil_spectrum(A, M, c == BcCase::NE || c == BcCase::EN);
}

double infsup_constant(const BlockSystem& system)
{
  check_cap(system.size());
  const Eigen::SimplicialLLT<SpMat> llt(system.M_V);
  if (llt.info() != Eigen::Success) throw std::runtime_error("infsup_constant: A_u + D_u is not SPD");
  const Eigen::MatrixXd Bt = Eigen::MatrixXd(system.B.transpose());
  const Eigen::MatrixXd X = llt.solve(Bt);
  const Vec s = system.I_p.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd S = s.asDiagonal() * (system.B * X) * s.asDiagonal();
  S = 0.5 * (S + S.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-10 * lmax) return std::sqrt(ev(i));
  return 0.0;
}

ErrorNorms error_norms_full(const CoupledSpace& space, const Vec& full_velocity, const Vec& pressure,
                            bool match_pressure_mean)
{
  const TriMesh& mesh = space.mesh();
  if (full_velocity.size() != space.full_velocity_size() || pressure.size() != mesh.num_triangles())
    throw std::invalid_argument("error_norms: length mismatch");

  double shift = 0.0;
  if (match_pressure_mean) {
    double exact_int = 0.0;
    double discrete_int = 0.0;
    double area = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const bool stokes = mesh.triangle(t).domain == Subdomain::Stokes;
      exact_int += quad::integrate_triangle(mesh, t, [&](const Vec2& x) {
        return stokes ? ManufacturedSolution::p_stokes(x) : ManufacturedSolution::p_darcy(x);
      });
      discrete_int += pressure(t) * mesh.triangle(t).area;
      area += mesh.triangle(t).area;
    }
    shift = (exact_int - discrete_int) / area;
  }

  ErrorNorms err;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const LocalFrame f(mesh, t);
    const bool stokes = mesh.triangle(t).domain == Subdomain::Stokes;
    const double ph = pressure(t) + shift;
    const double eu = quad::integrate_triangle(mesh, t, [&](const Vec2& x) {
      const Vec2 u = stokes ? ManufacturedSolution::u_stokes(x) : ManufacturedSolution::u_darcy(x);
      return (field_value(space, f, t, full_velocity, x) - u).squaredNorm();
    });
    const double ep = quad::integrate_triangle(mesh, t, [&](const Vec2& x) {
      const double p = stokes ? ManufacturedSolution::p_stokes(x) : ManufacturedSolution::p_darcy(x);
      return (ph - p) * (ph - p);
    });
    (stokes ? err.u_stokes : err.u_darcy) += eu;
    (stokes ? err.p_stokes : err.p_darcy) += ep;
  }
  err.u_stokes = std::sqrt(err.u_stokes);
  err.u_darcy = std::sqrt(err.u_darcy);
  err.p_stokes = std::sqrt(err.p_stokes);
  err.p_darcy = std::sqrt(err.p_darcy);
  return err;
}

ErrorNorms error_norms(const BlockSystem& system, const Vec& velocity, const Vec& pressure)
{
  const CoupledSpace& space = *system.space;
  const Vec full = space.expand(velocity) + system.lift;
  return error_norms_full(space, full, pressure, space.bc_case() == BcCase::EE);
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors)
{
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (errors[i] > 0.0 && errors[i - 1] > 0.0) out[i] = std::log2(errors[i - 1] / errors[i]);
  return out;
}

double eoc_least_squares(const std::vector<int>& n, const std::vector<double>& errors)
{
  if (n.size() != errors.size() || n.size() < 2) throw std::invalid_argument("eoc_least_squares: need >= 2 levels");
  const auto m = static_cast<double>(n.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] <= 0 || !(errors[i] > 0.0)) throw std::invalid_argument("eoc_least_squares: nonpositive data");
    const double x = std::log(static_cast<double>(n[i]));
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("eoc_least_squares: degenerate levels");
  return -(m * sxy - sx * sy) / denom;
}

}  // namespace sdkit
