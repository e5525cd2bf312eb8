#include "lifted/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <tuple>

#include "lifted/baselines.hpp"
#include "lifted/error.hpp"
#include "lifted/model.hpp"
#include "lifted/rounding.hpp"

namespace lifted {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::lifted: return "lifted";
    case Method::lifted_mean_offset: return "lifted_mean_offset";
    case Method::lasso: return "lasso";
    case Method::spectral: return "spectral";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::lifted, Method::lifted_mean_offset, Method::lasso, Method::spectral}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& c) {
  if (c.name.empty()) throw ConfigError("name must be nonempty");
  if (c.n < 1) throw ConfigError("n must be positive");
  if (c.m_grid.empty()) throw ConfigError("m_grid must be nonempty");
  for (std::size_t i = 0; i < c.m_grid.size(); ++i) {
    if (c.m_grid[i] < 1) throw ConfigError("m_grid entries must be positive");
    if (i > 0 && c.m_grid[i] <= c.m_grid[i - 1]) throw ConfigError("m_grid must be strictly increasing");
  }
  if (c.k && (*c.k < 1 || *c.k > c.n)) throw ConfigError("k must lie in [1, n]");
  if (c.trials < 1) throw ConfigError("trials must be positive");
  if (c.methods.empty()) throw ConfigError("methods must be nonempty");
  std::set<Method> seen(c.methods.begin(), c.methods.end());
  if (seen.size() != c.methods.size()) throw ConfigError("methods must not repeat");
  switch (c.mu_tilde.kind) {
    case MuTildePolicy::Kind::automatic: break;
    case MuTildePolicy::Kind::fixed:
      if (!std::isfinite(c.mu_tilde.value) || c.mu_tilde.value == 0.0) {
        throw ConfigError("fixed mu_tilde must be finite and nonzero");
      }
      break;
    case MuTildePolicy::Kind::sweep:
      if (c.mu_tilde.multipliers.empty()) throw ConfigError("mu_tilde sweep must list multipliers");
      for (double v : c.mu_tilde.multipliers) {
        if (!std::isfinite(v) || !(v > 0.0)) throw ConfigError("mu_tilde sweep multipliers must be positive");
      }
      break;
  }
  if (c.l1.kind == L1Policy::Kind::fixed && !(c.l1.value >= 0.0)) {
    throw ConfigError("fixed l1 radius must be nonnegative");
  }
  if (c.solver.max_iter < 0) throw ConfigError("solver max_iter must be nonnegative");
  if (!(c.solver.rel_tol > 0.0)) throw ConfigError("solver rel_tol must be positive");
  if (c.solver.window < 1) throw ConfigError("solver window must be positive");
  if (c.workers < 1) throw ConfigError("workers must be positive");
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial, int m, Method method) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(m),
                                 static_cast<std::uint64_t>(method)});
}

namespace {

struct Cell {
  Method method;
  int m;
  int trial;
};

struct Context {
  const ExperimentConfig& config;
  LinkFunction link;
  double mu_q = 0.0;
  std::vector<double> mu_tildes;
};

ResultRow base_row(const Context& ctx, const Cell& cell, std::uint64_t seed) {
  ResultRow row;
  row.name = ctx.config.name;
  row.link = ctx.config.link_id;
  row.method = std::string(method_name(cell.method));
  row.n = ctx.config.n;
  row.m = cell.m;
  row.k = ctx.config.k;
  row.trial = cell.trial;
  row.seed = seed;
  return row;
}

void fill_metrics(ResultRow& row, const RecoveryMetrics& metrics) {
  row.frob_error = metrics.frob_error;
  row.vec_error = metrics.vec_error;
  row.correlation = metrics.correlation;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::vector<ResultRow> run_cell(const Context& ctx, const Cell& cell) {
  const auto& config = ctx.config;
  const std::uint64_t seed = trial_seed(config.base_seed, cell.trial, cell.m, cell.method);
  std::vector<ResultRow> rows;
  try {
    const Signal signal = make_signal(config.n, config.k, derive_seed(seed, 2));
    const Ensemble ensemble = simulate_ensemble(ctx.link, signal, cell.m, seed);
    const double x0_l1 = signal.x0.cwiseAbs().sum();

    if (cell.method == Method::lifted || cell.method == Method::lifted_mean_offset) {
      for (double mu_tilde : ctx.mu_tildes) {
        ResultRow row = base_row(ctx, cell, seed);
        row.mu_tilde = mu_tilde;
        ProgramSpec spec;
        spec.loss = cell.method == Method::lifted ? LossKind::centered : LossKind::mean_offset;
        spec.mu_tilde = mu_tilde;
        if (config.l1.kind == L1Policy::Kind::automatic) spec.l1_radius = std::fabs(ctx.mu_q) * x0_l1 * x0_l1;
        if (config.l1.kind == L1Policy::Kind::fixed) spec.l1_radius = config.l1.value;
        const auto started = std::chrono::steady_clock::now();
        const SolverReport report = solve_lifted(spec, ensemble, config.solver);
        if (config.timing) row.runtime_ms = elapsed_ms(started);
        fill_metrics(row, recovery_metrics(report.X_hat, signal, ctx.mu_q));
        row.iterations = report.iterations;
        row.status = report.status == SolveStatus::converged ? "ok" : "max_iter";
        rows.push_back(std::move(row));
      }
      return rows;
    }

    ResultRow row = base_row(ctx, cell, seed);
    const double scale = std::fabs(ctx.mu_q) > 1e-12 ? ctx.mu_q : 1.0;
    const auto started = std::chrono::steady_clock::now();
    Vector x_hat;
    if (cell.method == Method::lasso) {
      const double radius = config.l1.kind == L1Policy::Kind::fixed ? config.l1.value : x0_l1;
      const LassoResult result = generalized_lasso(ensemble, radius);
      x_hat = result.x_hat;
      row.iterations = result.iterations;
      row.status = result.converged ? "ok" : "max_iter";
    } else {
      x_hat = spectral_baseline(ensemble);
    }
    if (config.timing) row.runtime_ms = elapsed_ms(started);
    fill_metrics(row, direction_metrics(x_hat, signal, scale));
    rows.push_back(std::move(row));
  } catch (const std::exception& e) {
    ResultRow row = base_row(ctx, cell, seed);
    row.status = std::string("error: ") + e.what();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_error_vs_m(const ExperimentConfig& config) {
  validate(config);
  Context ctx{config, make_link(config.link_id), 0.0, {}};
  ctx.mu_q = compute_moments(ctx.link).mu_q;
  const bool lifted_method = std::any_of(config.methods.begin(), config.methods.end(), [](Method m) {
    return m == Method::lifted || m == Method::lifted_mean_offset;
  });
  if (lifted_method && config.mu_tilde.kind != MuTildePolicy::Kind::fixed && std::fabs(ctx.mu_q) < 1e-12) {
    throw DegenerateLink("link '" + config.link_id + "' has mu_q = 0; the lifted estimator does not apply");
  }
  switch (config.mu_tilde.kind) {
    case MuTildePolicy::Kind::automatic: ctx.mu_tildes = {ctx.mu_q}; break;
    case MuTildePolicy::Kind::fixed: ctx.mu_tildes = {config.mu_tilde.value}; break;
    case MuTildePolicy::Kind::sweep:
      for (double v : config.mu_tilde.multipliers) ctx.mu_tildes.push_back(v * ctx.mu_q);
      break;
  }

  std::vector<Cell> cells;
  for (Method method : config.methods)
    for (int m : config.m_grid)
      for (int t = 0; t < config.trials; ++t) cells.push_back({method, m, t});

  std::vector<std::vector<ResultRow>> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = run_cell(ctx, cells[i]);
  };
  const int workers = std::min<int>(config.workers, static_cast<int>(cells.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(rows));
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.method, a.m, a.trial, a.mu_tilde) < std::tie(b.method, b.m, b.trial, b.mu_tilde);
  });
  return rows;
}

std::vector<ResultRow> run_tuning_sweep(const ExperimentConfig& config) {
  if (config.mu_tilde.kind != MuTildePolicy::Kind::sweep) {
    throw ConfigError("run_tuning_sweep needs a mu_tilde sweep");
  }
  return run_error_vs_m(config);
}

ScalingFit run_scaling_fit(const std::vector<ResultRow>& rows) {
  std::map<int, std::pair<double, int>> by_m;
  for (const auto& r : rows) {
    auto& [sum, count] = by_m[r.m];
    sum += r.frob_error;
    ++count;
  }
  if (by_m.size() < 4) throw InsufficientData("run_scaling_fit: need at least 4 distinct m");
  std::vector<double> x, y;
  for (const auto& [m, acc] : by_m) {
    const double mean = acc.first / acc.second;
    if (!(mean > 0.0)) throw InsufficientData("run_scaling_fit: mean error must be positive");
    x.push_back(std::log(static_cast<double>(m)));
    y.push_back(std::log(mean));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

std::vector<GroupSummary> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, int, double>;
  std::vector<Key> order;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    Key key{r.method, r.m, r.mu_tilde};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.first.push_back(r.frob_error);
    it->second.second.push_back(r.correlation);
  }
  std::vector<GroupSummary> out;
  for (const auto& key : order) {
    const auto& [frob, corr] = groups[key];
    GroupSummary g;
    std::tie(g.method, g.m, g.mu_tilde) = key;
    g.count = static_cast<int>(frob.size());
    for (double v : frob) g.mean_frob_error += v / g.count;
    for (double v : corr) g.mean_correlation += v / g.count;
    g.median_frob_error = median(frob);
    g.median_correlation = median(corr);
    out.push_back(g);
  }
  return out;
}

}  // namespace lifted
