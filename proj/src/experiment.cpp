#include "sdkit/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "sdkit/analysis.hpp"
#include "sdkit/preconditioner.hpp"

namespace sdkit {

namespace {

using json = nlohmann::json;

const std::vector<double> kParamGrid{1e-4, 1e-2, 1.0, 1e2, 1e4};

template <class T>
std::vector<T> read_list(const json& j, const char* key)
{
  std::vector<T> out;
  try {
    if (j.is_array()) {
      for (const auto& v : j) out.push_back(v.get<T>());
    } else {
      out.push_back(j.get<T>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("key '") + key + "': " + e.what());
  }
  return out;
}

std::string read_string(const json& j, const char* key)
{
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  if (!j.at(key).is_string()) throw ConfigError(std::string("key '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void apply_param_overrides(const json& j, PhysicalParams& p)
{
  if (!j.is_object()) throw ConfigError("'params' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError("params." + key + " must be a number");
    const double v = value.get<double>();
    if (key == "alpha_BJS") p.alpha_bjs = v;
    else if (key == "omega_S") p.omega_S = v;
    else if (key == "omega_D") p.omega_D = v;
    else if (key == "alpha_T") p.alpha_T = v;
    else if (key == "gamma_prime") p.gamma_prime = v;
    else if (key == "jump_penalty") p.jump_penalty = v;
    else if (key == "gamma") {
      if (v != PhysicalParams::gamma) throw ConfigError("params.gamma is fixed to 1");
    } else {
      throw ConfigError("unknown parameter '" + key + "'");
    }
  }
}

struct GridPoint {
  int n;
  double mu;
  double K;
};

std::shared_ptr<const CoupledSpace> make_space(const ExperimentConfig& cfg, int n)
{
  auto mesh = std::make_shared<const TriMesh>(build_mesh(n, cfg.bc));
  return std::make_shared<const CoupledSpace>(build_space(mesh, cfg.kind));
}

void solve_into(const BlockSystem& sys, const BlockPreconditioner& prec, ResultRow& row, SaddleSolve* keep = nullptr)
{
  SaddleSolve s = solve_system(sys, prec, KrylovConfig{});
  row.iters = s.report.iterations;
  row.relres = s.report.relative_residual;
  if (keep) *keep = std::move(s);
}

void run_point(const ExperimentConfig& cfg, const GridPoint& g, ResultRow& row)
{
  const auto space = make_space(cfg, g.n);
  PhysicalParams p = cfg.params;
  p.mu = g.mu;
  p.K = g.K;
  const BlockSystem sys = assemble_system(space, p);
  const bool fits = sys.size() <= kDenseCap;

  switch (cfg.experiment) {
    case ExperimentKind::Convergence: {
      SaddleSolve s;
      solve_into(sys, build_exact_preconditioner(sys), row, &s);
      const ErrorNorms e = error_norms(sys, s.velocity, s.pressure);
      row.err = {e.u_stokes, e.p_stokes, e.u_darcy, e.p_darcy};
      break;
    }
    case ExperimentKind::CondVsH:
    case ExperimentKind::CondVsParams: {
      solve_into(sys, build_exact_preconditioner(sys), row);
      if (fits) {
        const SpectrumReport r = preconditioned_spectrum(sys);
        row.kappa = r.kappa;
        row.kappa_eff = r.kappa_eff;
      }
      break;
    }
    case ExperimentKind::Infsup:
      row.infsup = infsup_constant(sys);
      break;
    case ExperimentKind::Inexact:
      solve_into(sys, build_inexact_preconditioner(sys), row);
      break;
  }
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string_view to_string(ExperimentKind k)
{
  switch (k) {
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::CondVsH: return "cond_vs_h";
    case ExperimentKind::CondVsParams: return "cond_vs_params";
    case ExperimentKind::Infsup: return "infsup";
    case ExperimentKind::Inexact: return "inexact";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view s)
{
  for (auto k : {ExperimentKind::Convergence, ExperimentKind::CondVsH, ExperimentKind::CondVsParams,
                 ExperimentKind::Infsup, ExperimentKind::Inexact})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const
{
  if (n.empty() || mu.empty() || K.empty()) throw ConfigError("grids n, mu and K must be nonempty");
  for (int v : n)
    if (v < 1) throw ConfigError("n must be >= 1");
  for (double v : mu)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("mu values must be positive");
  for (double v : K)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("K values must be positive");
  PhysicalParams p = params;
  p.mu = mu.front();
  p.K = K.front();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (experiment == ExperimentKind::Infsup) {
    for (int v : n) {
      const auto mesh = std::make_shared<const TriMesh>(build_mesh(v, bc));
      const CoupledSpace sp = build_space(mesh, kind);
      const int size = sp.free_velocity_size() + sp.pressure_size();
      if (size > kDenseCap)
        throw ConfigError("n=" + std::to_string(v) + " gives " + std::to_string(size) +
                          " DOFs, above the dense eigensolver cap of " + std::to_string(kDenseCap));
    }
  }
}

ExperimentConfig parse_config(const json& j)
{
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> allowed{"experiment", "kind", "case", "n", "mu", "K", "params", "out"};
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "'");

  ExperimentConfig cfg;
  cfg.experiment = parse_experiment_kind(read_string(j, "experiment"));
  try {
    cfg.kind = parse_fe_kind(read_string(j, "kind"));
    cfg.bc = parse_bc_case(read_string(j, "case"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  switch (cfg.experiment) {
    case ExperimentKind::Convergence:
      cfg.n = {4, 8, 16, 32, 64};
      cfg.mu = {1.0};
      cfg.K = {1.0};
      break;
    case ExperimentKind::CondVsH:
      cfg.n = {8, 16, 32, 64, 128};
      cfg.mu = {1.0};
      cfg.K = {1.0};
      break;
    case ExperimentKind::CondVsParams:
    case ExperimentKind::Inexact:
      cfg.n = {32};
      cfg.mu = kParamGrid;
      cfg.K = kParamGrid;
      break;
    case ExperimentKind::Infsup:
      cfg.n = {8};
      cfg.mu = kParamGrid;
      cfg.K = {1.0};
      break;
  }
  if (j.contains("n")) cfg.n = read_list<int>(j.at("n"), "n");
  if (j.contains("mu")) cfg.mu = read_list<double>(j.at("mu"), "mu");
  if (j.contains("K")) cfg.K = read_list<double>(j.at("K"), "K");
  if (j.contains("params")) apply_param_overrides(j.at("params"), cfg.params);
  if (j.contains("out")) cfg.out = read_string(j, "out");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int threads)
{
  config.validate();
  if (threads < 1) throw ConfigError("threads must be >= 1");

  std::vector<GridPoint> grid;
  for (int n : config.n)
    for (double mu : config.mu)
      for (double K : config.K) grid.push_back({n, mu, K});

  std::vector<ResultRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      ResultRow& row = rows[i];
      row.kind = config.kind;
      row.bc = config.bc;
      row.n = grid[i].n;
      row.mu = grid[i].mu;
      row.K = grid[i].K;
      try {
        run_point(config, grid[i], row);
      } catch (const std::exception& e) {
        row.failure = e.what();
      }
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(threads), grid.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // rates between consecutive refinements of the same (mu, K)
  if (config.experiment == ExperimentKind::Convergence) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ResultRow* prev = nullptr;
      for (std::size_t k = 0; k < i; ++k)
        if (rows[k].mu == rows[i].mu && rows[k].K == rows[i].K && rows[k].n < rows[i].n &&
            (!prev || rows[k].n > prev->n))
          prev = &rows[k];
      if (!prev) continue;
      const double ratio = static_cast<double>(rows[i].n) / prev->n;
      for (std::size_t f = 0; f < 4; ++f) {
        const auto& a = prev->err[f];
        const auto& b = rows[i].err[f];
        if (a && b && *a > 0.0 && *b > 0.0) rows[i].eoc[f] = std::log(*a / *b) / std::log(ratio);
      }
    }
  }
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os)
{
  os << "kind,case,n,h,mu,K,iters,relres,kappa,kappa_eff,infsup,err_uS,err_pS,err_uD,err_pD,eoc_uS,eoc_pS,eoc_uD,"
        "eoc_pD\n";
  for (const ResultRow& r : rows) {
    os << to_string(r.kind) << ',' << to_string(r.bc) << ',' << r.n << ',' << fmt(1.0 / r.n) << ',' << fmt(r.mu)
       << ',' << fmt(r.K) << ',' << (r.iters ? std::to_string(*r.iters) : std::string()) << ',' << fmt(r.relres)
       << ',' << fmt(r.kappa) << ',' << fmt(r.kappa_eff) << ',' << fmt(r.infsup);
    for (const auto& e : r.err) os << ',' << fmt(e);
    for (const auto& e : r.eoc) os << ',' << fmt(e);
    os << '\n';
  }
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open '" + path + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw OutputError("write to '" + path + "' failed");
}

}  // namespace sdkit
