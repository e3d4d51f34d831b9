#include "sdkit/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sdkit/basis.hpp"
#include "sdkit/quadrature.hpp"

namespace sdkit {

using Triplets = std::vector<Eigen::Triplet<double>>;

double PhysicalParams::beta_tilde() const { return alpha_bjs / std::sqrt(mu * K); }

void PhysicalParams::validate() const
{
  if (!(mu > 0.0) || !(K > 0.0)) throw std::invalid_argument("mu and K must be positive");
  if (!(omega_S >= 1.0) || !(omega_D >= 1.0)) throw std::invalid_argument("omega_S and omega_D must be >= 1");
  if (!(alpha_T > 0.0)) throw std::invalid_argument("alpha_T must be positive");
  if (!(gamma_prime > 0.0)) throw std::invalid_argument("gamma_prime must be positive");
  if (!(jump_penalty > 0.0)) throw std::invalid_argument("jump_penalty must be positive");
  if (!(alpha_bjs >= 0.0)) throw std::invalid_argument("alpha_BJS must be nonnegative");
}

namespace {

SpMat from_triplets(int rows, int cols, const Triplets& trip)
{
  SpMat m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

Mat2 strain(const Mat2& g) { return 0.5 * (g + g.transpose()); }

/// Outward fluxes through the three edges of t of the RT0 interpolant of a
/// P1 or CR basis function.
std::array<double, 3> rt_projection_fluxes(const TriMesh& mesh, int t, const LocalDof& d)
{
  const Triangle& tri = mesh.triangle(t);
  std::array<double, 3> flux{0.0, 0.0, 0.0};
  for (int j = 0; j < 3; ++j) {
    const Edge& edge = mesh.edge(tri.edges[static_cast<std::size_t>(j)]);
    const double n_out = tri.edge_signs[static_cast<std::size_t>(j)] * edge.normal(d.component);
    if (d.type == BasisType::P1 && j != d.local) flux[static_cast<std::size_t>(j)] = 0.5 * edge.length * n_out;
    if (d.type == BasisType::CR && j == d.local) flux[static_cast<std::size_t>(j)] = edge.length * n_out;
  }
  return flux;
}

Vec2 rt_projection_value(const LocalFrame& f, const std::array<double, 3>& flux, const Vec2& x)
{
  Vec2 v = Vec2::Zero();
  for (std::size_t j = 0; j < 3; ++j) v += flux[j] * (x - f.vertices[j]) / (2.0 * f.area);
  return v;
}

/// Mass matrix of all local DOFs on triangle t (6-point rule, exact for
/// the quadratic integrands).
void add_local_mass(const CoupledSpace& space, int t, double scale, Triplets& trip)
{
  const TriMesh& mesh = space.mesh();
  const LocalFrame f(mesh, t);
  const auto& dofs = space.element_dofs(t);
  const Triangle& tri = mesh.triangle(t);
  for (const auto& q : quad::kTriangle6) {
    const Vec2 x = quad::map_point(mesh, tri, q);
    const double w = scale * q.weight * f.area;
    for (const LocalDof& a : dofs) {
      const Vec2 va = basis_value(f, a, x);
      for (const LocalDof& b : dofs) trip.emplace_back(a.index, b.index, w * va.dot(basis_value(f, b, x)));
    }
  }
}

/// 2 (eps(u), eps(v))_T over the DOFs of the given types.
void add_local_strain(const CoupledSpace& space, int t, BasisType type, Triplets& trip)
{
  const LocalFrame f(space.mesh(), t);
  const auto& dofs = space.element_dofs(t);
  for (const LocalDof& a : dofs) {
    if (a.type != type) continue;
    const Mat2 ea = strain(basis_gradient(f, a));
    for (const LocalDof& b : dofs) {
      if (b.type != type) continue;
      const Mat2 eb = strain(basis_gradient(f, b));
      trip.emplace_back(a.index, b.index, 2.0 * f.area * ea.cwiseProduct(eb).sum());
    }
  }
}

/// Jump penalty on an interior edge: scale/h_e int_e J(u) J(v), where J is the
/// vector jump (normal_only = false) or the jump of v.n_e.
void add_jump_penalty(const CoupledSpace& space, int e, double scale, bool normal_only, Triplets& trip)
{
  const TriMesh& mesh = space.mesh();
  const Edge& edge = mesh.edge(e);
  const Vec2& a = mesh.vertex(edge.vertices[0]);
  const Vec2& b = mesh.vertex(edge.vertices[1]);
  const std::array<int, 2> tris = edge.triangles;
  const LocalFrame f0(mesh, tris[0]);
  const LocalFrame f1(mesh, tris[1]);
  struct Entry {
    int index;
    Vec2 value;
  };
  for (const auto& q : quad::kGauss2) {
    const Vec2 x = a + q.t * (b - a);
    std::vector<Entry> entries;
    for (int side = 0; side < 2; ++side) {
      const LocalFrame& f = side == 0 ? f0 : f1;
      const double sign = side == 0 ? 1.0 : -1.0;
      for (const LocalDof& d : space.element_dofs(tris[static_cast<std::size_t>(side)])) {
        Vec2 v = sign * basis_value(f, d, x);
        if (normal_only) v = edge.normal * v.dot(edge.normal);
        entries.push_back({d.index, v});
      }
    }
    const double w = scale * q.weight;  // (1/h_e) * (h_e * weight)
    for (const Entry& p : entries)
      for (const Entry& r : entries) trip.emplace_back(p.index, r.index, w * p.value.dot(r.value));
  }
}

bool interior_in(const TriMesh& mesh, const Edge& edge, Subdomain dom)
{
  return !edge.on_boundary() && !edge.interface && mesh.triangle(edge.triangles[0]).domain == dom &&
         mesh.triangle(edge.triangles[1]).domain == dom;
}

}  // namespace

SpMat assemble_stokes_conforming(const CoupledSpace& space, const PhysicalParams& params)
{
  if (space.kind() != FeKind::HdivConforming)
    throw std::invalid_argument("assemble_stokes_conforming: space is not H(div)-conforming");
  const TriMesh& mesh = space.mesh();
  Triplets trip;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (mesh.triangle(t).domain != Subdomain::Stokes) continue;
    add_local_strain(space, t, BasisType::P1, trip);
    // enrichment, diagonal in the RT0 DOFs
    const LocalFrame f(mesh, t);
    for (const LocalDof& d : space.element_dofs(t)) {
      if (d.type != BasisType::RT0) continue;
      const double div = basis_divergence(f, d);
      trip.emplace_back(d.index, d.index, 2.0 * params.alpha_T * div * div * f.area);
    }
  }

  const double beta = params.beta_tilde();
  for (int e : mesh.interface_edges()) {
    const Edge& edge = mesh.edge(e);
    const double h = edge.length;
    // BJS on the P1 tangential (y) components: edge mass h/6 [2 1; 1 2]
    const int ya = space.p1_dof(edge.vertices[0], 1);
    const int yb = space.p1_dof(edge.vertices[1], 1);
    trip.emplace_back(ya, ya, beta * h / 3.0);
    trip.emplace_back(yb, yb, beta * h / 3.0);
    trip.emplace_back(ya, yb, beta * h / 6.0);
    trip.emplace_back(yb, ya, beta * h / 6.0);

    // 2 (eps(u^l) n.n, v^R.n)_Gamma and its transpose. eps(u^l) n.n = d_x u_x
    // is constant on the Stokes triangle, and the RT0 DOF on e has unit flux.
    const int t = mesh.stokes_neighbor(e);
    const LocalFrame f(mesh, t);
    const int r = space.stokes_edge_dof(e);
    const Triangle& tri = mesh.triangle(t);
    for (std::size_t k = 0; k < 3; ++k) {
      const int px = space.p1_dof(tri.vertices[k], 0);
      const double c = 2.0 * PhysicalParams::gamma * f.grad_lambda[k].x();
      trip.emplace_back(r, px, c);
      trip.emplace_back(px, r, c);
    }
    // gamma'/h (u^R.n, v^R.n)_Gamma with u^R.n = 1/h_e on e
    trip.emplace_back(r, r, params.gamma_prime / (h * h));
  }
  return from_triplets(space.full_velocity_size(), space.full_velocity_size(), trip);
}

SpMat assemble_stokes_nonconforming(const CoupledSpace& space, const PhysicalParams& params)
{
  if (space.kind() != FeKind::Nonconforming)
    throw std::invalid_argument("assemble_stokes_nonconforming: space is not nonconforming");
  const TriMesh& mesh = space.mesh();
  Triplets trip;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (mesh.triangle(t).domain == Subdomain::Stokes) add_local_strain(space, t, BasisType::CR, trip);

  for (int e = 0; e < mesh.num_edges(); ++e)
    if (interior_in(mesh, mesh.edge(e), Subdomain::Stokes)) add_jump_penalty(space, e, params.jump_penalty, false, trip);

  const double beta = params.beta_tilde();
  for (int e : mesh.interface_edges()) {
    const int t = mesh.stokes_neighbor(e);
    const LocalFrame f(mesh, t);
    const Edge& edge = mesh.edge(e);
    const Vec2& a = mesh.vertex(edge.vertices[0]);
    const Vec2& b = mesh.vertex(edge.vertices[1]);
    for (const auto& q : quad::kGauss2) {
      const Vec2 x = a + q.t * (b - a);
      const double w = beta * q.weight * edge.length;
      for (const LocalDof& da : space.element_dofs(t)) {
        if (da.component != 1) continue;
        const double va = basis_value(f, da, x).y();
        for (const LocalDof& db : space.element_dofs(t)) {
          if (db.component != 1) continue;
          trip.emplace_back(da.index, db.index, w * va * basis_value(f, db, x).y());
        }
      }
    }
  }
  return from_triplets(space.full_velocity_size(), space.full_velocity_size(), trip);
}

SpMat assemble_darcy(const CoupledSpace& space, const PhysicalParams& params)
{
  const TriMesh& mesh = space.mesh();
  Triplets trip;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (mesh.triangle(t).domain == Subdomain::Darcy) add_local_mass(space, t, 1.0, trip);
  if (space.kind() == FeKind::Nonconforming) {
    for (int e = 0; e < mesh.num_edges(); ++e)
      if (interior_in(mesh, mesh.edge(e), Subdomain::Darcy)) add_jump_penalty(space, e, params.jump_penalty, true, trip);
  }
  return from_triplets(space.full_velocity_size(), space.full_velocity_size(), trip);
}

SpMat assemble_divergence(const CoupledSpace& space)
{
  const TriMesh& mesh = space.mesh();
  Triplets trip;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const LocalFrame f(mesh, t);
    for (const LocalDof& d : space.element_dofs(t)) trip.emplace_back(t, d.index, -basis_divergence(f, d) * f.area);
  }
  return from_triplets(mesh.num_triangles(), space.full_velocity_size(), trip);
}

Vec assemble_pressure_norm(const TriMesh& mesh, const PhysicalParams& params)
{
  Vec ip(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangle(t);
    ip(t) = tri.domain == Subdomain::Stokes ? tri.area / (params.omega_S * params.mu)
                                            : params.K * tri.area / params.omega_D;
  }
  return ip;
}

SpMat assemble_grad_div(const SpMat& B, const Vec& pressure_norm)
{
  if (B.rows() != pressure_norm.size()) throw std::invalid_argument("assemble_grad_div: dimension mismatch");
  const Vec w = pressure_norm.cwiseInverse();
  SpMat D = SpMat(B.transpose()) * w.asDiagonal() * B;
  D.prune(0.0);
  D.makeCompressed();
  return D;
}

Vec rt_interpolant(const TriMesh& mesh, const std::function<Vec2(const Vec2&)>& field)
{
  Vec flux(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Vec2 n = mesh.edge(e).normal;
    flux(e) = quad::integrate_edge(mesh, e, quad::kGauss2, [&](const Vec2& x) { return field(x).dot(n); });
  }
  return flux;
}

Vec rt_interpolant(const CoupledSpace& space, const Vec& full)
{
  if (full.size() != space.full_velocity_size()) throw std::invalid_argument("rt_interpolant: length mismatch");
  const TriMesh& mesh = space.mesh();
  Vec flux = Vec::Zero(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    int t = -1;
    for (int s : edge.triangles)
      if (s >= 0 && mesh.triangle(s).domain == Subdomain::Stokes) t = s;
    if (t < 0) continue;
    const LocalFrame f(mesh, t);
    flux(e) = quad::integrate_edge(mesh, e, quad::kGauss2, [&](const Vec2& x) {
      Vec2 v = Vec2::Zero();
      for (const LocalDof& d : space.element_dofs(t))
        if (d.type != BasisType::RT0) v += full(d.index) * basis_value(f, d, x);
      return v.dot(edge.normal);
    });
  }
  return flux;
}

Vec2 rt_field_value(const TriMesh& mesh, const Vec& fluxes, int t, const Vec2& x)
{
  if (fluxes.size() != mesh.num_edges()) throw std::invalid_argument("rt_field_value: length mismatch");
  const LocalFrame f(mesh, t);
  const Triangle& tri = mesh.triangle(t);
  Vec2 v = Vec2::Zero();
  for (std::size_t k = 0; k < 3; ++k)
    v += fluxes(tri.edges[k]) * tri.edge_signs[k] * (x - f.vertices[k]) / (2.0 * f.area);
  return v;
}

namespace {

Vec essential_lift(const CoupledSpace& space)
{
  const TriMesh& mesh = space.mesh();
  Vec g = Vec::Zero(space.full_velocity_size());
  auto mean_on_edge = [&](int e, auto&& fn) {
    auto integral = quad::integrate_edge(mesh, e, quad::kGauss5, fn);
    integral /= mesh.edge(e).length;
    return integral;
  };
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Vec2 n = edge.normal;
    if (edge.tag == BoundaryTag::StokesEssential) {
      const double flux = quad::integrate_edge(mesh, e, quad::kGauss5,
                                               [&](const Vec2& x) { return ManufacturedSolution::u_stokes(x).dot(n); });
      if (space.kind() == FeKind::HdivConforming) {
        const Vec2 ua = ManufacturedSolution::u_stokes(mesh.vertex(edge.vertices[0]));
        const Vec2 ub = ManufacturedSolution::u_stokes(mesh.vertex(edge.vertices[1]));
        for (int c = 0; c < 2; ++c) {
          g(space.p1_dof(edge.vertices[0], c)) = ua(c);
          g(space.p1_dof(edge.vertices[1], c)) = ub(c);
        }
        g(space.stokes_edge_dof(e)) = flux - 0.5 * edge.length * (ua + ub).dot(n);
      } else {
        const Vec2 mean = mean_on_edge(e, [](const Vec2& x) { return Vec2(ManufacturedSolution::u_stokes(x)); });
        g(space.stokes_edge_dof(e, 0)) = mean.x();
        g(space.stokes_edge_dof(e, 1)) = mean.y();
      }
    } else if (edge.tag == BoundaryTag::DarcyEssential) {
      if (space.kind() == FeKind::HdivConforming) {
        g(space.darcy_edge_dof(e)) = quad::integrate_edge(
            mesh, e, quad::kGauss5, [&](const Vec2& x) { return ManufacturedSolution::u_darcy(x).dot(n); });
      } else {
        const int c = std::abs(n.x()) > 0.5 ? 0 : 1;
        g(space.darcy_edge_dof(e, c)) = mean_on_edge(e, [&](const Vec2& x) { return ManufacturedSolution::u_darcy(x)(c); });
      }
    }
  }
  space.apply_interface_constraints(g);
  return g;
}

}  // namespace

RhsVectors assemble_rhs(const CoupledSpace& space, const PhysicalParams& params, const ManufacturedSolution& exact)
{
  const TriMesh& mesh = space.mesh();
  const bool conforming = space.kind() == FeKind::HdivConforming;
  Vec F = Vec::Zero(space.full_velocity_size());
  Vec G = Vec::Zero(mesh.num_triangles());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangle(t);
    const LocalFrame f(mesh, t);
    const auto& dofs = space.element_dofs(t);
    if (tri.domain == Subdomain::Stokes) {
      std::vector<std::array<double, 3>> proj(dofs.size());
      for (std::size_t i = 0; i < dofs.size(); ++i)
        if (dofs[i].type != BasisType::RT0) proj[i] = rt_projection_fluxes(mesh, t, dofs[i]);
      for (const auto& q : quad::kTriangle6) {
        const Vec2 x = quad::map_point(mesh, tri, q);
        const Vec2 fs = exact.f_stokes(x);
        const double w = q.weight * f.area;
        for (std::size_t i = 0; i < dofs.size(); ++i) {
          const Vec2 v =
              dofs[i].type == BasisType::RT0 ? basis_value(f, dofs[i], x) : rt_projection_value(f, proj[i], x);
          F(dofs[i].index) += w * fs.dot(v);
        }
      }
    } else {
      for (const auto& q : quad::kTriangle6) {
        const Vec2 x = quad::map_point(mesh, tri, q);
        const Vec2 fd = exact.f_darcy(x);
        const double w = q.weight * f.area;
        for (const LocalDof& d : dofs) F(d.index) += w * fd.dot(basis_value(f, d, x));
        G(t) -= w * ManufacturedSolution::g_darcy(x);
      }
    }
  }

  // Boundary and interface line integrals over the traces of the adjacent triangle.
  auto edge_integral = [&](int e, int t, auto&& integrand) {
    const LocalFrame f(mesh, t);
    const Edge& edge = mesh.edge(e);
    const Vec2& a = mesh.vertex(edge.vertices[0]);
    const Vec2& b = mesh.vertex(edge.vertices[1]);
    for (const auto& q : quad::kGauss5) {
      const Vec2 x = a + q.t * (b - a);
      const double w = q.weight * edge.length;
      for (const LocalDof& d : space.element_dofs(t)) F(d.index) += w * integrand(d, x, basis_value(f, d, x));
    }
  };

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Vec2 n = edge.normal;
    if (edge.tag == BoundaryTag::StokesNatural) {
      edge_integral(e, edge.triangles[0],
                    [&](const LocalDof&, const Vec2& x, const Vec2& v) { return (exact.stress(x) * n).dot(v); });
    } else if (edge.tag == BoundaryTag::DarcyNatural) {
      edge_integral(e, edge.triangles[0], [&](const LocalDof&, const Vec2& x, const Vec2& v) {
        return -ManufacturedSolution::p_darcy(x) * v.dot(n);
      });
    }
  }
  // The normal residual is tested against the RT0 interpolant of the trace,
  // i.e. paired through its edge mean, like the Darcy pressure it balances.
  for (int e : mesh.interface_edges()) {
    const double rn_mean =
        quad::integrate_edge(mesh, e, quad::kGauss5, [&](const Vec2& x) { return exact.r_normal(x.y()); }) /
        mesh.edge(e).length;
    edge_integral(e, mesh.stokes_neighbor(e), [&](const LocalDof& d, const Vec2& x, const Vec2& v) {
      double val = -rn_mean * v.x();
      if (!conforming || d.type == BasisType::P1) val -= exact.r_tangential(x.y()) * v.y();
      return val;
    });
  }

  RhsVectors out;
  out.lift = essential_lift(space);
  const SpMat A_full = params.mu * (conforming ? assemble_stokes_conforming(space, params)
                                               : assemble_stokes_nonconforming(space, params)) +
                       assemble_darcy(space, params) / params.K;
  const SpMat B_full = assemble_divergence(space);
  out.f_u = space.extension().transpose() * (F - A_full * out.lift);
  out.g_p = G - B_full * out.lift;
  if (space.bc_case() == BcCase::EE) out.g_p.array() -= out.g_p.mean();
  return out;
}

SpMat BlockSystem::saddle_matrix() const
{
  const int nu = velocity_size();
  const int np = pressure_size();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(A_u.nonZeros() + 2 * B.nonZeros()));
  for (int k = 0; k < A_u.outerSize(); ++k)
    for (SpMat::InnerIterator it(A_u, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B.outerSize(); ++k)
    for (SpMat::InnerIterator it(B, k); it; ++it) {
      trip.emplace_back(nu + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), nu + it.row(), it.value());
    }
  return from_triplets(nu + np, nu + np, trip);
}

Vec BlockSystem::rhs() const
{
  Vec b(size());
  b << f_u, g_p;
  return b;
}

BlockSystem assemble_system(std::shared_ptr<const CoupledSpace> space, const PhysicalParams& params)
{
  if (!space) throw std::invalid_argument("assemble_system: null space");
  params.validate();
  BlockSystem sys;
  sys.space = space;
  sys.params = params;
  const CoupledSpace& sp = *space;
  const bool conforming = sp.kind() == FeKind::HdivConforming;
  const SpMat a_s = conforming ? assemble_stokes_conforming(sp, params) : assemble_stokes_nonconforming(sp, params);
  sys.A_full = params.mu * a_s + assemble_darcy(sp, params) / params.K;
  sys.B_full = assemble_divergence(sp);
  const SpMat& C = sp.extension();
  const SpMat Ct = C.transpose();
  sys.A_u = Ct * sys.A_full * C;
  sys.A_u.prune(0.0);
  sys.B = sys.B_full * C;
  sys.B.prune(0.0);
  sys.I_p = assemble_pressure_norm(sp.mesh(), params);
  sys.D_u = assemble_grad_div(sys.B, sys.I_p);
  sys.M_V = sys.A_u + sys.D_u;
  const ManufacturedSolution exact(params.mu, params.K, params.alpha_bjs);
  RhsVectors rhs = assemble_rhs(sp, params, exact);
  sys.f_u = std::move(rhs.f_u);
  sys.g_p = std::move(rhs.g_p);
  sys.lift = std::move(rhs.lift);
  return sys;
}

}  // namespace sdkit
