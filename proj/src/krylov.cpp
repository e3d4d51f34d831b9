#include "sdkit/krylov.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sdkit {

void KrylovConfig::validate() const
{
  if (!(tol > 0.0)) throw std::invalid_argument("KrylovConfig: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("KrylovConfig: max_iter must be >= 1");
}

LinearMap as_map(const SpMat& A)
{
  return [&A](const Vec& x) -> Vec { return A * x; };
}

KrylovResult gmres(const LinearMap& A, const Vec& b, const LinearMap& precond, const KrylovConfig& config)
{
  config.validate();
  if (!A) throw std::invalid_argument("gmres: empty operator");
  if (!b.allFinite()) throw std::invalid_argument("gmres: non-finite right-hand side");
  const auto start = std::chrono::steady_clock::now();
  auto apply_prec = [&](const Vec& v) -> Vec { return precond ? precond(v) : v; };

  KrylovResult out;
  SolveReport& rep = out.report;
  const Eigen::Index n = b.size();
  out.x = Vec::Zero(n);
  const double bnorm = b.norm();
  rep.true_residual_history.push_back(bnorm);
  auto finish = [&]() {
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    finish();
    return out;
  }

  // right preconditioning keeps the directions z_j = M^{-1} v_j, which is
  // exactly the flexible variant when M^{-1} is linear
  const bool right = config.flexible || config.side == PrecondSide::Right;
  Vec r0 = right ? b : apply_prec(b);
  const double beta = r0.norm();
  rep.residual_history.push_back(beta);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    rep.breakdown = true;
    rep.relative_residual = 1.0;
    finish();
    return out;
  }

  std::vector<Vec> V;
  std::vector<Vec> Z;
  std::vector<std::vector<double>> R;  // rotated Hessenberg columns
  std::vector<double> cs;
  std::vector<double> sn;
  std::vector<double> g{beta};
  V.push_back(r0 / beta);

  for (int j = 0; j < config.max_iter; ++j) {
    Vec w;
    if (right) {
      Z.push_back(apply_prec(V[static_cast<std::size_t>(j)]));
      w = A(Z.back());
    } else {
      w = apply_prec(A(V[static_cast<std::size_t>(j)]));
    }
    const double wnorm0 = w.norm();
    std::vector<double> h(static_cast<std::size_t>(j) + 2, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const double hij = V[static_cast<std::size_t>(i)].dot(w);
        h[static_cast<std::size_t>(i)] += hij;
        w -= hij * V[static_cast<std::size_t>(i)];
      }
    }
    const double hnext = w.norm();
    h[static_cast<std::size_t>(j) + 1] = hnext;
    const bool breakdown = !(hnext > 1e-14 * wnorm0);

    for (int i = 0; i < j; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double t = cs[ui] * h[ui] + sn[ui] * h[ui + 1];
      h[ui + 1] = -sn[ui] * h[ui] + cs[ui] * h[ui + 1];
      h[ui] = t;
    }
    const auto uj = static_cast<std::size_t>(j);
    const double denom = std::hypot(h[uj], h[uj + 1]);
    const double c = denom > 0.0 ? h[uj] / denom : 1.0;
    const double s = denom > 0.0 ? h[uj + 1] / denom : 0.0;
    cs.push_back(c);
    sn.push_back(s);
    h[uj] = denom;
    h[uj + 1] = 0.0;
    g.push_back(-s * g[uj]);
    g[uj] = c * g[uj];
    R.push_back(std::move(h));
    rep.residual_history.push_back(std::abs(g[uj + 1]));

    // current iterate
    std::vector<double> y(uj + 1, 0.0);
    for (int i = j; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      double acc = g[ui];
      for (std::size_t k = ui + 1; k <= uj; ++k) acc -= R[k][ui] * y[k];
      y[ui] = R[ui][ui] != 0.0 ? acc / R[ui][ui] : 0.0;
    }
    out.x.setZero();
    const std::vector<Vec>& basis = right ? Z : V;
    for (std::size_t i = 0; i <= uj; ++i) out.x += y[i] * basis[i];
    const double true_res = (b - A(out.x)).norm();
    rep.true_residual_history.push_back(true_res);
    rep.iterations = j + 1;
    rep.relative_residual = true_res / bnorm;
    if (true_res <= config.tol * bnorm) {
      rep.converged = true;
      break;
    }
    if (breakdown) {
      rep.breakdown = true;
      break;
    }
    V.push_back(w / hnext);
  }
  finish();
  return out;
}

}  // namespace sdkit
