#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lifted/solver.hpp"

namespace lifted {

enum class Method { lifted, lifted_mean_offset, lasso, spectral };

std::string_view method_name(Method method);
/// Throws ConfigError for an unknown name.
Method parse_method(std::string_view name);

struct MuTildePolicy {
  enum class Kind { automatic, fixed, sweep } kind = Kind::automatic;
  double value = 0.0;
  /// Multipliers of mu_q, for Kind::sweep.
  std::vector<double> multipliers;

  static MuTildePolicy automatic() { return {}; }
  static MuTildePolicy fixed(double v) { return {Kind::fixed, v, {}}; }
  static MuTildePolicy sweep(std::vector<double> m) { return {Kind::sweep, 0.0, std::move(m)}; }
};

struct L1Policy {
  enum class Kind { off, automatic, fixed } kind = Kind::off;
  double value = 0.0;

  static L1Policy off() { return {}; }
  static L1Policy automatic() { return {Kind::automatic, 0.0}; }
  static L1Policy fixed(double v) { return {Kind::fixed, v}; }
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string link_id = "quadratic";
  int n = 50;
  std::vector<int> m_grid = {250, 500, 1000, 1500, 2000};
  /// Empty for a dense signal.
  std::optional<int> k;
  int trials = 40;
  std::uint64_t base_seed = 0;
  std::vector<Method> methods = {Method::lifted};
  MuTildePolicy mu_tilde;
  L1Policy l1;
  SolverOptions solver;
  std::string output;
  /// Record wall-clock times in runtime_ms. Off by default so that output
  /// bytes depend only on the configuration.
  bool timing = false;
  int workers = 1;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const ExperimentConfig& config);

/// One CSV line. `status` is "ok", "max_iter", or "error: <message>".
struct ResultRow {
  std::string name;
  std::string link;
  std::string method;
  int n = 0;
  int m = 0;
  std::optional<int> k;
  int trial = 0;
  std::uint64_t seed = 0;
  double mu_tilde = 0.0;
  double frob_error = 0.0;
  std::optional<double> vec_error;
  double correlation = 0.0;
  int iterations = 0;
  double runtime_ms = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Seed of the instance behind (trial, m, method). The mu_tilde multiplier is
/// deliberately left out so that a tuning sweep compares estimates on the
/// same data.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial, int m, Method method);

/// Every (method, m, trial) cell of the config; rows sorted by
/// (method, m, trial, mu_tilde). Cell failures are recorded in `status`.
std::vector<ResultRow> run_error_vs_m(const ExperimentConfig& config);
/// run_error_vs_m for a config whose mu_tilde policy is a sweep.
std::vector<ResultRow> run_tuning_sweep(const ExperimentConfig& config);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log(mean frob_error) against log m over the distinct
/// m of `rows`. Throws InsufficientData with fewer than 4 distinct m or a
/// nonpositive mean error.
ScalingFit run_scaling_fit(const std::vector<ResultRow>& rows);

struct GroupSummary {
  std::string method;
  int m = 0;
  double mu_tilde = 0.0;
  int count = 0;
  double mean_frob_error = 0.0;
  double median_frob_error = 0.0;
  double mean_correlation = 0.0;
  double median_correlation = 0.0;
};

/// Per (method, m, mu_tilde) aggregates, in row order.
std::vector<GroupSummary> summarize(const std::vector<ResultRow>& rows);

}  // namespace lifted
