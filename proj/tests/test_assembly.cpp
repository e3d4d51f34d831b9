#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sdkit/assembly.hpp"
#include "sdkit/basis.hpp"
#include "sdkit/manufactured.hpp"
#include "sdkit/quadrature.hpp"
#include "support.hpp"

namespace sdkit {
namespace {

using testing::interpolate_full;
using testing::kAllCases;
using testing::kAllKinds;
using testing::make_space;
using testing::make_system;
using testing::random_vector;

constexpr double kPi = std::numbers::pi;

double max_abs(const SpMat& A)
{
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

TEST(PhysicalParams, BetaTildeAndValidation)
{
  PhysicalParams p;
  p.mu = 1e-2;
  p.K = 1e-2;
  EXPECT_NEAR(p.beta_tilde(), 100.0, 1e-12);
  p.omega_S = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.omega_S = 100.0;
  p.K = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(StokesConforming, TranslationHasZeroEnergy)
{
  const auto sp = make_space(3, BcCase::NN, FeKind::HdivConforming);
  const SpMat A = assemble_stokes_conforming(*sp, PhysicalParams{});
  Vec v = Vec::Zero(sp->full_velocity_size());
  for (int i = 0; i < sp->mesh().num_vertices(); ++i)
    if (sp->p1_dof(i, 0) >= 0) v(sp->p1_dof(i, 0)) = 1.0;
  EXPECT_NEAR(v.dot(A * v), 0.0, 1e-12);
}

TEST(StokesConforming, InterfaceFluxDiagonalOnSingleCell)
{
  const auto sp = make_space(1, BcCase::NN, FeKind::HdivConforming);
  PhysicalParams p;
  const SpMat A = assemble_stokes_conforming(*sp, p);
  const TriMesh& m = sp->mesh();
  const int e = m.interface_edges().front();
  const int t = m.stokes_neighbor(e);
  const int dof = sp->stokes_edge_dof(e);
  const LocalFrame f(m, t);
  LocalDof d;
  for (const LocalDof& ld : sp->element_dofs(t))
    if (ld.index == dof) d = ld;
  // (gamma'/h) int_e (phi.n)^2 by 2-point Gauss, plus the enrichment term
  const double penalty = p.gamma_prime / m.edge(e).length *
                         quad::integrate_edge(m, e, quad::kGauss2, [&](const Vec2& x) {
                           const double vn = basis_value(f, d, x).dot(m.edge(e).normal);
                           return vn * vn;
                         });
  EXPECT_NEAR(penalty, 1.0, 1e-14);
  const double enrichment = 2.0 * p.alpha_T / m.triangle(t).area;
  EXPECT_NEAR(A.coeff(dof, dof), enrichment + penalty, 1e-12);
}

TEST(StokesConforming, WrongKindThrows)
{
  const auto sp = make_space(2, BcCase::NN, FeKind::Nonconforming);
  EXPECT_THROW((void)assemble_stokes_conforming(*sp, PhysicalParams{}), std::invalid_argument);
  const auto sc = make_space(2, BcCase::NN, FeKind::HdivConforming);
  EXPECT_THROW((void)assemble_stokes_nonconforming(*sc, PhysicalParams{}), std::invalid_argument);
}

TEST(StokesNonconforming, ShearFieldEnergyEqualsArea)
{
  // v = (y, 0): eps = [[0, 1/2], [1/2, 0]], 2|eps|^2 = 1; continuous, so
  // no jump energy; v.tau = 0 on the interface, so no BJS energy.
  const auto sp = make_space(4, BcCase::NN, FeKind::Nonconforming);
  const SpMat A = assemble_stokes_nonconforming(*sp, PhysicalParams{});
  const Vec v = interpolate_full(*sp, [](const Vec2& x) { return Vec2(x.y(), 0.0); });
  EXPECT_NEAR(v.dot(A * v), 1.0, 1e-12);
}

TEST(StokesNonconforming, ContinuousLinearFieldHasNoJumpEnergy)
{
  // v = (0, x): 2|eps|^2 = 1 over |Omega_S| = 1, plus beta~ int_Gamma x^2 = 1
  const auto sp = make_space(4, BcCase::NN, FeKind::Nonconforming);
  const SpMat A = assemble_stokes_nonconforming(*sp, PhysicalParams{});
  const Vec v = interpolate_full(*sp, [](const Vec2& x) { return Vec2(0.0, x.x()); });
  EXPECT_NEAR(v.dot(A * v), 2.0, 1e-12);
}

TEST(StokesNonconforming, Symmetric)
{
  const SpMat A = assemble_stokes_nonconforming(*make_space(2, BcCase::NE, FeKind::Nonconforming), PhysicalParams{});
  EXPECT_LE(max_abs(A - SpMat(A.transpose())), 1e-14 * max_abs(A));
}

TEST(Darcy, MassOfConstantField)
{
  for (FeKind k : kAllKinds) {
    const auto sp = make_space(3, BcCase::NN, k);
    const SpMat A = assemble_darcy(*sp, PhysicalParams{});
    Vec v = interpolate_full(*sp, [](const Vec2&) { return Vec2(1.0, 0.0); });
    v.head(sp->num_stokes_velocity()).setZero();
    EXPECT_NEAR(v.dot(A * v), 1.0, 1e-12) << to_string(k);
  }
}

TEST(Darcy, NormalJumpVanishesForLinearField)
{
  // int over [1,2]x[0,1] of x^2 + y^2 = 7/3 + 1/3
  const auto sp = make_space(2, BcCase::NN, FeKind::Nonconforming);
  const SpMat A = assemble_darcy(*sp, PhysicalParams{});
  Vec v = interpolate_full(*sp, [](const Vec2& x) { return x; });
  v.head(sp->num_stokes_velocity()).setZero();
  EXPECT_NEAR(v.dot(A * v), 8.0 / 3.0, 1e-12);
}

TEST(Darcy, PositiveForRandomFields)
{
  for (FeKind k : kAllKinds) {
    const auto sp = make_space(2, BcCase::EE, k);
    const SpMat A = assemble_darcy(*sp, PhysicalParams{});
    Vec v = random_vector(sp->full_velocity_size(), 7);
    v.head(sp->num_stokes_velocity()).setZero();
    EXPECT_GT(v.dot(A * v), 0.0);
  }
}

TEST(Divergence, RtBasisHasUnitSignedFlux)
{
  const auto sp = make_space(2, BcCase::NN, FeKind::HdivConforming);
  const SpMat B = assemble_divergence(*sp);
  const TriMesh& m = sp->mesh();
  for (int t = 0; t < m.num_triangles(); ++t)
    for (const LocalDof& d : sp->element_dofs(t)) {
      if (d.type != BasisType::RT0) continue;
      const double expected = -d.orientation * m.triangle(t).edge_signs[static_cast<std::size_t>(d.local)];
      EXPECT_DOUBLE_EQ(B.coeff(t, d.index), expected);
    }
}

TEST(Divergence, ConstantPressureAnnihilatesEeSpace)
{
  for (FeKind k : kAllKinds) {
    const BlockSystem s = make_system(2, BcCase::EE, k);
    const Vec ones = Vec::Ones(s.pressure_size());
    const Vec r = SpMat(s.B.transpose()) * ones;
    EXPECT_LE(r.cwiseAbs().maxCoeff(), 1e-13) << to_string(k);
  }
}

TEST(Divergence, RowsMatchBoundaryFluxes)
{
  for (FeKind k : kAllKinds) {
    const auto sp = make_space(2, BcCase::NN, k);
    const SpMat B = assemble_divergence(*sp);
    const Vec v = random_vector(sp->full_velocity_size(), 3);
    const Vec bv = B * v;
    for (int t = 0; t < sp->mesh().num_triangles(); ++t)
      EXPECT_NEAR(bv(t), -testing::outward_flux(*sp, v, t), 1e-13);
  }
}

TEST(GradDiv, MatchesWeightedDivergenceNorm)
{
  for (FeKind k : kAllKinds) {
    const BlockSystem s = make_system(2, BcCase::NE, k, 0.3, 2.0);
    const CoupledSpace& sp = *s.space;
    const Vec x = random_vector(s.velocity_size(), 11);
    const Vec full = sp.expand(x);
    double oracle = 0.0;
    for (int t = 0; t < sp.mesh().num_triangles(); ++t) {
      const Triangle& tri = sp.mesh().triangle(t);
      const double div = testing::outward_flux(sp, full, t) / tri.area;
      const double w = tri.domain == Subdomain::Stokes ? s.params.omega_S * s.params.mu : s.params.omega_D / s.params.K;
      oracle += w * quad::integrate_triangle(sp.mesh(), t, [&](const Vec2&) { return div * div; });
    }
    EXPECT_NEAR(x.dot(s.D_u * x), oracle, 1e-10 * oracle) << to_string(k);
  }
}

TEST(GradDiv, SemidefiniteAndKernel)
{
  for (FeKind k : kAllKinds) {
    const BlockSystem s = make_system(2, BcCase::NN, k);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(s.D_u), Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * es.eigenvalues().maxCoeff());
    const Eigen::MatrixXd Z = testing::kernel_basis(s.B);
    ASSERT_GT(Z.cols(), 0);
    const Vec z = Z * random_vector(Z.cols(), 5);
    EXPECT_NEAR(z.dot(s.D_u * z), 0.0, 1e-10);
  }
}

TEST(GradDiv, DimensionMismatchThrows)
{
  const BlockSystem s = make_system(1, BcCase::NN, FeKind::HdivConforming);
  EXPECT_THROW((void)assemble_grad_div(s.B, Vec::Ones(s.pressure_size() + 1)), std::invalid_argument);
}

TEST(PressureNorm, Entries)
{
  const TriMesh m = build_mesh(2, BcCase::NN);
  PhysicalParams p;
  p.K = 1e-4;
  const Vec ip = assemble_pressure_norm(m, p);
  for (int t = 0; t < m.num_triangles(); ++t) {
    if (m.triangle(t).domain == Subdomain::Stokes) EXPECT_NEAR(ip(t), 1.25e-3, 1e-18);
    else EXPECT_NEAR(ip(t), 1.25e-5, 1e-20);
  }
}

TEST(PressureNorm, MatchesQuadrature)
{
  const TriMesh m = build_mesh(2, BcCase::EN);
  PhysicalParams p;
  p.mu = 3.0;
  p.K = 0.2;
  const Vec ip = assemble_pressure_norm(m, p);
  const Vec q = random_vector(m.num_triangles(), 9);
  double oracle = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double w = m.triangle(t).domain == Subdomain::Stokes ? 1.0 / (p.omega_S * p.mu) : p.K / p.omega_D;
    oracle += w * quad::integrate_triangle(m, t, [&](const Vec2&) { return q(t) * q(t); });
  }
  EXPECT_NEAR(q.dot(ip.asDiagonal() * q), oracle, 1e-14);
}

TEST(RtInterpolant, ReproducesConstants)
{
  const TriMesh m = build_mesh(3, BcCase::NN);
  const Vec flux = rt_interpolant(m, [](const Vec2&) { return Vec2(1.0, 0.0); });
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Vec2 c = m.triangle_geometry(t).barycenter;
    const Vec2 v = rt_field_value(m, flux, t, c + Vec2(0.01, -0.02));
    EXPECT_NEAR(v.x(), 1.0, 1e-13);
    EXPECT_NEAR(v.y(), 0.0, 1e-13);
  }
}

TEST(RtInterpolant, CommutesWithDivergence)
{
  const TriMesh m = build_mesh(2, BcCase::NN);
  const Vec flux = rt_interpolant(m, [](const Vec2& x) { return Vec2(x.x() * x.x(), 0.0); });
  for (int t = 0; t < m.num_triangles(); ++t) {
    double net = 0.0;
    for (int k = 0; k < 3; ++k)
      net += m.triangle(t).edge_signs[static_cast<std::size_t>(k)] * flux(m.triangle(t).edges[static_cast<std::size_t>(k)]);
    const double div = quad::integrate_triangle(m, t, [](const Vec2& x) { return 2.0 * x.x(); });
    EXPECT_NEAR(net, div, 1e-14);
  }
}

TEST(RtInterpolant, CrBasisFluxIsMidpointRule)
{
  const auto sp = make_space(2, BcCase::NN, FeKind::Nonconforming);
  const TriMesh& m = sp->mesh();
  for (int e = 0; e < m.num_edges(); ++e) {
    for (int c = 0; c < 2; ++c) {
      const int dof = sp->stokes_edge_dof(e, c);
      if (dof < 0) continue;
      Vec full = Vec::Zero(sp->full_velocity_size());
      full(dof) = 1.0;
      const Vec flux = rt_interpolant(*sp, full);
      for (int j = 0; j < m.num_edges(); ++j) {
        const double expected = j == e ? m.edge(e).length * m.edge(e).normal(c) : 0.0;
        EXPECT_NEAR(flux(j), expected, 1e-14) << "dof edge " << e << " flux edge " << j;
      }
      // cross-check on a support triangle with the 2-point rule
      const int t = m.edge(e).triangles[0];
      if (m.triangle(t).domain != Subdomain::Stokes) continue;
      const LocalFrame f(m, t);
      const double gauss = quad::integrate_edge(m, e, quad::kGauss2, [&](const Vec2& x) {
        return field_value(*sp, f, t, full, x).dot(m.edge(e).normal);
      });
      EXPECT_NEAR(flux(e), gauss, 1e-14);
    }
  }
}

TEST(Manufactured, DarcyForceVanishesForUnitParameters)
{
  const ManufacturedSolution s(1.0, 1.0, 1.0);
  for (double x : {1.0, 1.3, 1.9})
    for (double y : {0.0, 0.4, 0.8}) EXPECT_NEAR(s.f_darcy(Vec2(x, y)).norm(), 0.0, 1e-13);
}

TEST(Manufactured, DarcySourceClosedForm)
{
  const double e = std::numbers::e;
  for (double x : {1.1, 1.5, 2.0})
    for (double y : {0.1, 0.5, 0.7}) {
      const double expected = std::cos(kPi * y) * (kPi * kPi * (std::exp(x) - x * e) - std::exp(x));
      EXPECT_NEAR(ManufacturedSolution::g_darcy(Vec2(x, y)), expected, 1e-12);
    }
}

TEST(Manufactured, NormalResidualVanishesForUnitViscosity)
{
  const ManufacturedSolution s(1.0, 0.01, 1.0);
  for (double y : {0.0, 0.25, 0.6, 1.0}) EXPECT_NEAR(s.r_normal(y), 0.0, 1e-13);
  const ManufacturedSolution t(2.0, 1.0, 1.0);
  EXPECT_GT(std::abs(t.r_normal(0.1)), 1e-3);
}

TEST(Manufactured, StokesVelocityIsSolenoidal)
{
  const double h = 1e-5;
  for (double x : {0.2, 0.7})
    for (double y : {0.3, 0.9}) {
      const double dux = (ManufacturedSolution::u_stokes(Vec2(x + h, y)).x() - ManufacturedSolution::u_stokes(Vec2(x - h, y)).x()) / (2 * h);
      const double dvy = (ManufacturedSolution::u_stokes(Vec2(x, y + h)).y() - ManufacturedSolution::u_stokes(Vec2(x, y - h)).y()) / (2 * h);
      EXPECT_NEAR(dux + dvy, 0.0, 1e-8);
      EXPECT_NEAR(ManufacturedSolution::grad_u_stokes(Vec2(x, y)).trace(), 0.0, 1e-13);
    }
}

TEST(Manufactured, NormalFluxContinuousOnInterface)
{
  for (double y : {0.0, 0.3, 0.77}) {
    EXPECT_NEAR(ManufacturedSolution::u_stokes(Vec2(1.0, y)).x(), 0.0, 1e-14);
    EXPECT_NEAR(ManufacturedSolution::u_darcy(Vec2(1.0, y)).x(), 0.0, 1e-14);
  }
}

TEST(AssemblyProperty, SymmetryAllCases)
{
  for (FeKind k : kAllKinds)
    for (BcCase c : kAllCases)
      for (int n : {1, 2, 4, 8}) {
        const BlockSystem s = make_system(n, c, k, 0.1, 10.0);
        EXPECT_LE(max_abs(s.A_u - SpMat(s.A_u.transpose())), 1e-12 * max_abs(s.A_u));
        EXPECT_LE(max_abs(s.D_u - SpMat(s.D_u.transpose())), 1e-12 * max_abs(s.D_u));
        EXPECT_GT(s.I_p.minCoeff(), 0.0);
      }
}

TEST(AssemblyProperty, KernelCoercivity)
{
  for (FeKind k : kAllKinds)
    for (BcCase c : kAllCases) {
      const BlockSystem s = make_system(2, c, k, 0.5, 3.0);
      const Eigen::MatrixXd Z = testing::kernel_basis(s.B);
      for (unsigned trial = 0; trial < 100; ++trial) {
        const Vec x = Z * random_vector(Z.cols(), 1000 + trial);
        EXPECT_GE(x.dot(s.A_u * x), (1.0 - 1e-8) * x.dot(s.M_V * x));
      }
    }
}

TEST(AssemblyProperty, ContinuityOfDivergence)
{
  unsigned seed = 50;
  for (FeKind k : kAllKinds)
    for (BcCase c : kAllCases) {
      const BlockSystem s = make_system(4, c, k, 2.0, 1e-2);
      for (int trial = 0; trial < 20; ++trial) {
        const Vec x = random_vector(s.velocity_size(), seed++);
        const Vec q = random_vector(s.pressure_size(), seed++);
        const double lhs = std::abs(q.dot(s.B * x));
        const double rhs = std::sqrt(x.dot(s.M_V * x)) * std::sqrt(q.dot(s.I_p.asDiagonal() * q));
        EXPECT_LE(lhs, rhs * (1.0 + 1e-12));
      }
    }
}

TEST(AssemblyProperty, ViscosityHomogeneity)
{
  // mu -> c mu scales the Stokes block by c when beta~ mu = alpha sqrt(mu/K)
  // is compensated through alpha_BJS.
  const double c = 7.0;
  for (FeKind k : kAllKinds) {
    const auto sp = make_space(3, BcCase::NN, k);
    PhysicalParams p1;
    p1.mu = 0.4;
    p1.K = 2.0;
    PhysicalParams p2 = p1;
    p2.mu = c * p1.mu;
    p2.alpha_bjs = p1.alpha_bjs * std::sqrt(c);
    const BlockSystem s1 = assemble_system(sp, p1);
    const BlockSystem s2 = assemble_system(sp, p2);
    const int ns = sp->num_stokes_velocity();
    const int nd = sp->num_darcy_velocity();
    const Eigen::MatrixXd A1(s1.A_full);
    const Eigen::MatrixXd A2(s2.A_full);
    EXPECT_LE((A2.topLeftCorner(ns, ns) - c * A1.topLeftCorner(ns, ns)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((A2.bottomRightCorner(nd, nd) - A1.bottomRightCorner(nd, nd)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace
}  // namespace sdkit
