#include "sdkit/preconditioner.hpp"

#include <stdexcept>

namespace sdkit {

BlockPreconditioner::BlockPreconditioner(BlockPreconditioner&& other) noexcept
    : mode_(other.mode_),
      nu_(other.nu_),
      ip_inv_(std::move(other.ip_inv_)),
      M_V_(std::move(other.M_V_)),
      llt_(std::move(other.llt_)),
      amg_(std::move(other.amg_)),
      inner_tol_(other.inner_tol_),
      inner_max_iter_(other.inner_max_iter_),
      inner_iterations_(other.inner_iterations_.load()),
      inner_failures_(other.inner_failures_.load())
{
}

Vec BlockPreconditioner::apply_velocity(const Vec& r) const
{
  if (mode_ == PrecondMode::Exact) return llt_->solve(r);
  const UaAmg& amg = *amg_;
  const LinearMap prec = [&amg](const Vec& v) { return amg.vcycle(v); };
  KrylovConfig cfg;
  cfg.tol = inner_tol_;
  cfg.max_iter = inner_max_iter_;
  KrylovResult res = gmres(sdkit::as_map(*M_V_), r, prec, cfg);
  inner_iterations_ += res.report.iterations;
  if (!res.report.converged) ++inner_failures_;
  return std::move(res.x);
}

Vec BlockPreconditioner::apply(const Vec& r) const
{
  if (r.size() != nu_ + ip_inv_.size()) throw std::invalid_argument("BlockPreconditioner: length mismatch");
  Vec z(r.size());
  z.head(nu_) = apply_velocity(r.head(nu_));
  z.tail(ip_inv_.size()) = ip_inv_.cwiseProduct(r.tail(ip_inv_.size()));
  return z;
}

LinearMap BlockPreconditioner::as_map() const
{
  return [this](const Vec& r) { return apply(r); };
}

BlockPreconditioner build_exact_preconditioner(const BlockSystem& system)
{
  BlockPreconditioner p;
  p.mode_ = PrecondMode::Exact;
  p.nu_ = system.velocity_size();
  p.ip_inv_ = system.I_p.cwiseInverse();
  p.M_V_ = std::make_shared<const SpMat>(system.M_V);
  p.llt_ = std::make_shared<Eigen::SimplicialLLT<SpMat>>(system.M_V);
  if (p.llt_->info() != Eigen::Success) throw std::runtime_error("build_exact_preconditioner: A_u + D_u is not SPD");
  return p;
}

BlockPreconditioner build_inexact_preconditioner(const BlockSystem& system, double inner_tol, int inner_max_iter,
                                                 const AmgOptions& amg)
{
  if (!(inner_tol > 0.0) || inner_max_iter < 1) throw std::invalid_argument("build_inexact_preconditioner: bad inner settings");
  BlockPreconditioner p;
  p.mode_ = PrecondMode::Inexact;
  p.nu_ = system.velocity_size();
  p.ip_inv_ = system.I_p.cwiseInverse();
  p.M_V_ = std::make_shared<const SpMat>(system.M_V);
  p.amg_ = std::make_shared<UaAmg>(system.M_V, system.space->vertex_patches(), amg);
  p.inner_tol_ = inner_tol;
  p.inner_max_iter_ = inner_max_iter;
  return p;
}

Vec triangle_areas(const TriMesh& mesh)
{
  Vec a(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) a(t) = mesh.triangle(t).area;
  return a;
}

Vec project_pressure_mean(const Vec& solution, const Vec& areas)
{
  if (solution.size() < areas.size()) throw std::invalid_argument("project_pressure_mean: vector too short");
  Vec out = solution;
  auto p = out.tail(areas.size());
  const double mean = p.dot(areas) / areas.sum();
  p.array() -= mean;
  return out;
}

SaddleSolve solve_system(const BlockSystem& system, const BlockPreconditioner& precond, KrylovConfig config)
{
  if (precond.mode() == PrecondMode::Inexact) config.flexible = true;
  const SpMat K = system.saddle_matrix();
  KrylovResult res = gmres(as_map(K), system.rhs(), precond.as_map(), config);
  Vec x = std::move(res.x);
  if (system.space->bc_case() == BcCase::EE) x = project_pressure_mean(x, triangle_areas(system.space->mesh()));
  SaddleSolve out;
  out.velocity = x.head(system.velocity_size());
  out.pressure = x.tail(system.pressure_size());
  out.report = std::move(res.report);
  return out;
}

}  // namespace sdkit
