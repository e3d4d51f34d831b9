#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sdkit/assembly.hpp"

namespace sdkit {

enum class ExperimentKind { Convergence, CondVsH, CondVsParams, Infsup, Inexact };

std::string_view to_string(ExperimentKind k);
/// Throws ConfigError for unknown names.
ExperimentKind parse_experiment_kind(std::string_view s);

/// Invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written; the CLI maps it to exit code 3.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CondVsH;
  FeKind kind = FeKind::HdivConforming;
  BcCase bc = BcCase::NN;
  std::vector<int> n;
  std::vector<double> mu;
  std::vector<double> K;
  /// Overrides for everything except mu and K, which come from the grids.
  PhysicalParams params;
  /// Empty means standard output.
  std::string out;

  /// Nonempty grids, positive values, n within the dense cap for the
  /// inf-sup experiment. Throws ConfigError.
  void validate() const;
};

/// Reads the keys experiment, kind, case, n, mu, K, params, out. Missing
/// grids fall back to per-experiment defaults; unknown keys are rejected.
/// Throws ConfigError.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  FeKind kind = FeKind::HdivConforming;
  BcCase bc = BcCase::NN;
  int n = 0;
  double mu = 1.0;
  double K = 1.0;
  std::optional<int> iters;
  std::optional<double> relres;
  std::optional<double> kappa;
  std::optional<double> kappa_eff;
  std::optional<double> infsup;
  /// u_S, p_S, u_D, p_D
  std::array<std::optional<double>, 4> err;
  std::array<std::optional<double>, 4> eoc;
  /// Set when the grid point threw; the remaining columns stay empty.
  std::optional<std::string> failure;
};

/// Grid points in the order n, then mu, then K. Each point is independent
/// and dispatched to a pool of `threads` workers; the returned rows follow
/// the grid order regardless of completion order.
[[nodiscard]] std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int threads = 1);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os);
/// Throws OutputError when the file cannot be written.
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace sdkit
