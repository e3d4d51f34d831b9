#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sdkit/spaces.hpp"

namespace sdkit {

struct AmgOptions {
  /// Connection i-j is strong when |a_ij| >= theta sqrt(a_ii a_jj).
  double strength_threshold = 0.25;
  int max_levels = 3;
  /// Stop coarsening once a level is at most this size.
  int coarse_size = 50;
};

/// Unsmoothed-aggregation AMG for an SPD matrix, applied as one V-cycle.
///
/// The finest level is smoothed by a multiplicative overlapping Schwarz
/// method over the given index blocks (forward sweep before the coarse
/// correction, backward after it); coarser levels use symmetric
/// Gauss-Seidel; the coarsest level is solved densely. Without blocks the
/// finest level uses Gauss-Seidel as well.
class UaAmg {
 public:
  UaAmg(const SpMat& A, std::vector<std::vector<int>> blocks, const AmgOptions& options = {});

  [[nodiscard]] Vec vcycle(const Vec& b) const;
  [[nodiscard]] int num_levels() const { return static_cast<int>(levels_.size()); }
  [[nodiscard]] std::vector<int> level_sizes() const;

  /// Greedy root-node aggregation of the strength graph; returns the
  /// aggregate of every node and the number of aggregates.
  static std::vector<int> aggregate(const SpMat& A, double theta, int& num_aggregates);

 private:
  struct Level {
    SpMat A;
    SpMat P;  // to this level from the next coarser one (empty on the coarsest)
    Vec diag;
  };
  struct Block {
    std::vector<int> dofs;
    Eigen::LDLT<Eigen::MatrixXd> solver;
  };

  std::vector<Level> levels_;
  std::vector<Block> blocks_;
  Eigen::LLT<Eigen::MatrixXd> coarse_;

  void schwarz_sweep(const SpMat& A, const Vec& b, Vec& x, bool forward) const;
  static void gauss_seidel(const SpMat& A, const Vec& diag, const Vec& b, Vec& x, bool forward);
  [[nodiscard]] Vec cycle(std::size_t level, const Vec& b) const;
};

}  // namespace sdkit
