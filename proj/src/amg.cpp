#include "sdkit/amg.hpp"

#include <cmath>
#include <stdexcept>

namespace sdkit {

std::vector<int> UaAmg::aggregate(const SpMat& A, double theta, int& num_aggregates)
{
  const int n = static_cast<int>(A.rows());
  const Vec d = A.diagonal();
  std::vector<std::vector<std::pair<int, double>>> strong(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (SpMat::InnerIterator it(A, i); it; ++it) {
      const int j = static_cast<int>(it.row());
      if (j == i) continue;
      const double a = std::abs(it.value());
      if (a >= theta * std::sqrt(std::abs(d(i) * d(j))) && a > 0.0) strong[static_cast<std::size_t>(i)].emplace_back(j, a);
    }
  }

  std::vector<int> agg(static_cast<std::size_t>(n), -1);
  int count = 0;
  // roots whose whole strong neighborhood is still free
  for (int i = 0; i < n; ++i) {
    const auto& nb = strong[static_cast<std::size_t>(i)];
    if (agg[static_cast<std::size_t>(i)] >= 0 || nb.empty()) continue;
    bool free = true;
    for (auto [j, a] : nb) free = free && agg[static_cast<std::size_t>(j)] < 0;
    if (!free) continue;
    agg[static_cast<std::size_t>(i)] = count;
    for (auto [j, a] : nb) agg[static_cast<std::size_t>(j)] = count;
    ++count;
  }
  // attach leftovers to the most strongly connected aggregate
  const std::vector<int> first = agg;
  for (int i = 0; i < n; ++i) {
    if (agg[static_cast<std::size_t>(i)] >= 0) continue;
    double best = -1.0;
    for (auto [j, a] : strong[static_cast<std::size_t>(i)]) {
      if (first[static_cast<std::size_t>(j)] >= 0 && a > best) {
        best = a;
        agg[static_cast<std::size_t>(i)] = first[static_cast<std::size_t>(j)];
      }
    }
  }
  // whatever remains forms new aggregates with its free strong neighbors
  for (int i = 0; i < n; ++i) {
    if (agg[static_cast<std::size_t>(i)] >= 0) continue;
    agg[static_cast<std::size_t>(i)] = count;
    for (auto [j, a] : strong[static_cast<std::size_t>(i)])
      if (agg[static_cast<std::size_t>(j)] < 0) agg[static_cast<std::size_t>(j)] = count;
    ++count;
  }
  num_aggregates = count;
  return agg;
}

UaAmg::UaAmg(const SpMat& A, std::vector<std::vector<int>> blocks, const AmgOptions& options)
{
  if (A.rows() != A.cols() || A.rows() == 0) throw std::invalid_argument("UaAmg: matrix must be square and nonempty");
  if (options.max_levels < 1) throw std::invalid_argument("UaAmg: max_levels must be >= 1");

  levels_.push_back({A, SpMat(), A.diagonal()});
  while (static_cast<int>(levels_.size()) < options.max_levels && levels_.back().A.rows() > options.coarse_size) {
    const SpMat& Af = levels_.back().A;
    int nc = 0;
    const std::vector<int> agg = aggregate(Af, options.strength_threshold, nc);
    if (nc == 0 || nc > 0.9 * static_cast<double>(Af.rows())) break;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(agg.size());
    for (std::size_t i = 0; i < agg.size(); ++i) trip.emplace_back(static_cast<int>(i), agg[i], 1.0);
    SpMat P(Af.rows(), nc);
    P.setFromTriplets(trip.begin(), trip.end());
    SpMat Ac = SpMat(P.transpose()) * Af * P;
    Ac.makeCompressed();
    levels_.back().P = P;
    Vec dc = Ac.diagonal();
    levels_.push_back({std::move(Ac), SpMat(), std::move(dc)});
  }

  coarse_.compute(Eigen::MatrixXd(levels_.back().A));
  if (coarse_.info() != Eigen::Success) throw std::runtime_error("UaAmg: coarsest matrix is not SPD");

  const Eigen::Index n = A.rows();
  for (auto& dofs : blocks) {
    if (dofs.empty()) continue;
    for (int i : dofs)
      if (i < 0 || i >= n) throw std::invalid_argument("UaAmg: block index out of range");
    Eigen::MatrixXd local(static_cast<Eigen::Index>(dofs.size()), static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t a = 0; a < dofs.size(); ++a)
      for (std::size_t b = 0; b < dofs.size(); ++b) local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = A.coeff(dofs[a], dofs[b]);
    Block blk{std::move(dofs), Eigen::LDLT<Eigen::MatrixXd>(local)};
    blocks_.push_back(std::move(blk));
  }
}

std::vector<int> UaAmg::level_sizes() const
{
  std::vector<int> s;
  for (const Level& l : levels_) s.push_back(static_cast<int>(l.A.rows()));
  return s;
}

void UaAmg::gauss_seidel(const SpMat& A, const Vec& diag, const Vec& b, Vec& x, bool forward)
{
  const int n = static_cast<int>(A.rows());
  for (int k = 0; k < n; ++k) {
    const int i = forward ? k : n - 1 - k;
    double s = b(i);
    // A is symmetric, so column i holds row i
    for (SpMat::InnerIterator it(A, i); it; ++it)
      if (it.row() != i) s -= it.value() * x(it.row());
    x(i) = s / diag(i);
  }
}

void UaAmg::schwarz_sweep(const SpMat& A, const Vec& b, Vec& x, bool forward) const
{
  Vec r = b - A * x;
  const std::size_t nb = blocks_.size();
  for (std::size_t k = 0; k < nb; ++k) {
    const Block& blk = blocks_[forward ? k : nb - 1 - k];
    const auto m = static_cast<Eigen::Index>(blk.dofs.size());
    Vec rl(m);
    for (Eigen::Index a = 0; a < m; ++a) rl(a) = r(blk.dofs[static_cast<std::size_t>(a)]);
    const Vec dl = blk.solver.solve(rl);
    for (Eigen::Index a = 0; a < m; ++a) {
      const int col = blk.dofs[static_cast<std::size_t>(a)];
      x(col) += dl(a);
      for (SpMat::InnerIterator it(A, col); it; ++it) r(it.row()) -= it.value() * dl(a);
    }
  }
}

Vec UaAmg::cycle(std::size_t level, const Vec& b) const
{
  if (level + 1 == levels_.size()) return coarse_.solve(b);
  const Level& L = levels_[level];
  const bool schwarz = level == 0 && !blocks_.empty();
  Vec x = Vec::Zero(b.size());
  if (schwarz) schwarz_sweep(L.A, b, x, true);
  else gauss_seidel(L.A, L.diag, b, x, true);
  const Vec r = b - L.A * x;
  x += L.P * cycle(level + 1, L.P.transpose() * r);
  if (schwarz) schwarz_sweep(L.A, b, x, false);
  else gauss_seidel(L.A, L.diag, b, x, false);
  return x;
}

Vec UaAmg::vcycle(const Vec& b) const
{
  if (b.size() != levels_.front().A.rows()) throw std::invalid_argument("UaAmg::vcycle: length mismatch");
  return cycle(0, b);
}

}  // namespace sdkit
