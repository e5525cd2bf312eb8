#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lifted/error.hpp"
#include "lifted/experiments.hpp"
#include "lifted/geometry.hpp"
#include "lifted/io.hpp"
#include "lifted/model.hpp"
#include "lifted/rounding.hpp"
#include "lifted/solver.hpp"

using namespace lifted;

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_text_file(path, text);
  }
}

std::optional<double> parse_auto(const std::string& value, double automatic, const char* flag) {
  if (value.empty()) return std::nullopt;
  if (value == "auto") return automatic;
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(flag) + " expects a number or 'auto'");
  }
}

LossKind parse_loss(const std::string& name) {
  if (name == "centered") return LossKind::centered;
  if (name == "mean-offset" || name == "mean_offset") return LossKind::mean_offset;
  if (name == "phaselift") return LossKind::phaselift;
  throw ConfigError("unknown loss '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifted least-squares recovery from nonlinear Gaussian measurements"};
  app.require_subcommand(1);

  // moments
  auto* moments = app.add_subcommand("moments", "Model moments of a link function");
  std::string m_link;
  int m_nodes = 20001;
  std::uint64_t m_samples = 0, m_seed = 0;
  bool m_json = false;
  moments->add_option("--link", m_link, "Link id")->required();
  moments->add_option("--nodes", m_nodes, "Quadrature nodes");
  moments->add_option("--mc-samples", m_samples, "Use Monte Carlo with this many samples");
  moments->add_option("--seed", m_seed, "Monte Carlo seed");
  moments->add_flag("--json", m_json, "Print JSON");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw a problem instance");
  std::string s_link, s_out;
  int s_n = 0, s_m = 0, s_k = 0, s_offset = 0;
  std::uint64_t s_seed = 0;
  simulate->add_option("--link", s_link, "Link id")->required();
  simulate->add_option("--n", s_n, "Signal dimension")->required();
  simulate->add_option("--m", s_m, "Number of measurements")->required();
  simulate->add_option("--k", s_k, "Sparsity (0 = dense)");
  simulate->add_option("--seed", s_seed, "Seed");
  simulate->add_option("--offset-count", s_offset, "Rows reserved for estimating mu0");
  simulate->add_option("--out", s_out, "Output path (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the lifted program for an instance");
  std::string v_input, v_out, v_mu = "auto", v_l1, v_loss = "centered", v_algorithm = "projected-gradient",
                           v_step = "fixed";
  double v_lambda = 0.0;
  int v_max_iter = 5000;
  solve->add_option("--input", v_input, "Ensemble JSON")->required();
  solve->add_option("--mu-tilde", v_mu, "Trace cap: number or 'auto'");
  solve->add_option("--l1-radius", v_l1, "Entrywise l1 radius: number or 'auto'");
  solve->add_option("--loss", v_loss, "centered | mean-offset | phaselift");
  solve->add_option("--lambda", v_lambda, "Trace penalty (replaces the cap when > 0)");
  solve->add_option("--max-iter", v_max_iter, "Iteration limit");
  solve->add_option("--algorithm", v_algorithm, "projected-gradient | three-operator");
  solve->add_option("--step", v_step, "fixed | backtracking");
  solve->add_option("--out", v_out, "Report path (default stdout)");

  // widths
  auto* widths = app.add_subcommand("widths", "Width estimates for the feasible-direction cones");
  std::string w_cone;
  int w_n = 0, w_k = 1, w_m = 0, w_trials = 1000;
  double w_t = 1.0, w_mu = 1.0;
  std::uint64_t w_seed = 0;
  bool w_json = false;
  widths->add_option("--cone", w_cone, "psd | sparse | full | subspace")->required();
  widths->add_option("--n", w_n, "Dimension")->required();
  widths->add_option("--k", w_k, "Support size");
  widths->add_option("--m", w_m, "Measurements; selects the weighted empirical width (p = 1)");
  widths->add_option("--t", w_t, "Scale");
  widths->add_option("--mu", w_mu, "Shift of the psd cone");
  widths->add_option("--trials", w_trials, "Monte Carlo samples");
  widths->add_option("--seed", w_seed, "Seed");
  widths->add_flag("--json", w_json, "Print JSON");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run an experiment config and write CSV rows");
  std::string e_config, e_out;
  int e_workers = 0;
  bool e_timing = false;
  experiment->add_option("--config", e_config, "Config JSON")->required();
  experiment->add_option("--out", e_out, "CSV path (default: config output, else stdout)");
  experiment->add_option("--workers", e_workers, "Worker threads");
  experiment->add_flag("--timing", e_timing, "Record wall-clock runtime_ms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*moments) {
      const LinkFunction link = make_link(m_link);
      IntegrationSpec spec = QuadratureRule{m_nodes, 8.0};
      if (m_samples > 0) spec = MonteCarloRule{m_samples, m_seed};
      const ModelMoments mm = compute_moments(link, spec);
      if (m_json) {
        emit(moments_to_json(m_link, mm), "");
      } else {
        std::printf("mu0 %.10g\nmu_ell %.10g\ntau_ell %.10g\nmu_q %.10g\ntau_q %.10g\nrho_q %.10g\neta_q %.10g\n",
                    mm.mu0, mm.mu_ell, mm.tau_ell, mm.mu_q, mm.tau_q, mm.rho_q, mm.eta_q);
      }
      return 0;
    }

    if (*simulate) {
      const LinkFunction link = make_link(s_link);
      const std::optional<int> k = s_k > 0 ? std::optional<int>(s_k) : std::nullopt;
      const Signal signal = make_signal(s_n, k, derive_seed(s_seed, 2));
      emit(ensemble_to_json(simulate_ensemble(link, signal, s_m, s_seed, s_offset)), s_out);
      return 0;
    }

    if (*solve) {
      const Ensemble ensemble = ensemble_from_json(read_text_file(v_input));
      std::optional<double> mu_q;
      try {
        mu_q = compute_moments(make_link(ensemble.link_id)).mu_q;
      } catch (const ConfigError&) {
        // Unknown link: oracle tuning and metrics are unavailable.
      }
      const bool needs_oracle = v_mu == "auto" || v_l1 == "auto";
      if (needs_oracle && !mu_q) throw ConfigError("'auto' needs a builtin link id in the ensemble");
      const double mq = mu_q.value_or(0.0);
      const double x0_l1 = ensemble.signal.x0.cwiseAbs().sum();

      ProgramSpec spec;
      spec.loss = parse_loss(v_loss);
      spec.mu_tilde = *parse_auto(v_mu, mq, "--mu-tilde");
      spec.l1_radius = parse_auto(v_l1, std::fabs(mq) * x0_l1 * x0_l1, "--l1-radius");
      spec.trace_penalty = v_lambda;

      SolverOptions options;
      options.max_iter = v_max_iter;
      if (v_algorithm == "three-operator") {
        options.algorithm = Algorithm::three_operator;
      } else if (v_algorithm != "projected-gradient") {
        throw ConfigError("unknown algorithm '" + v_algorithm + "'");
      }
      if (v_step == "backtracking") {
        options.step = StepPolicy::backtracking;
      } else if (v_step != "fixed") {
        throw ConfigError("unknown step policy '" + v_step + "'");
      }

      SolveSummary summary{spec, solve_lifted(spec, ensemble, options), std::nullopt, mq};
      if (mu_q && ensemble.signal.dim() == ensemble.dim()) {
        summary.metrics = recovery_metrics(summary.report.X_hat, ensemble.signal, mq);
      }
      emit(report_to_json(summary), v_out);
      return summary.report.status == SolveStatus::converged ? 0 : 1;
    }

    if (*widths) {
      const WeightVector ones = WeightVector::ones(std::max(w_m, 1));
      WidthEstimate est;
      if (w_cone == "full") {
        est = gaussian_width_mc(ConeSpec::full_space(w_n), w_t, w_trials, w_seed);
      } else if (w_cone == "subspace") {
        est = gaussian_width_mc(ConeSpec::support_subspace(w_n, w_k), w_t, w_trials, w_seed);
      } else if (w_cone == "psd") {
        if (w_m > 0) {
          est = empirical_width_polar_psd(w_n, w_m, ones, w_trials, w_seed);
        } else {
          est = gaussian_width_mc(ConeSpec::psd_shift(w_mu, basis_signal(w_n, 0).x0), w_t, w_trials, w_seed);
        }
      } else if (w_cone == "sparse") {
        if (w_m > 0) {
          est = empirical_width_polar_sparse(w_n, w_k, w_m, ones, SparseLambdaPolicy::optimize(), w_trials, w_seed);
        } else {
          est = gaussian_width_mc(ConeSpec::l1_descent(w_n, w_k), w_t, w_trials, w_seed);
        }
      } else {
        throw ConfigError("unknown cone '" + w_cone + "'");
      }
      if (w_json) {
        emit(width_to_json(w_cone, est), "");
      } else {
        std::printf("%s width %.10g +- %.3g (%d samples%s)\n", w_cone.c_str(), est.value, est.std_error, est.trials,
                    est.upper_bound ? ", upper bound" : "");
      }
      return 0;
    }

    if (*experiment) {
      ExperimentConfig config = config_from_json(read_text_file(e_config));
      if (e_workers > 0) config.workers = e_workers;
      if (e_timing) config.timing = true;
      const auto rows = run_error_vs_m(config);
      emit(rows_to_csv(rows), e_out.empty() ? config.output : e_out);
      int bad = 0;
      for (const auto& r : rows) bad += !r.ok();
      for (const auto& g : summarize(rows)) {
        std::fprintf(stderr, "%-20s m=%-6d mu_tilde=%-10.4g mean frob %.4g  mean corr %.4f\n", g.method.c_str(), g.m,
                     g.mu_tilde, g.mean_frob_error, g.mean_correlation);
      }
      if (bad) std::fprintf(stderr, "%d of %zu rows not ok\n", bad, rows.size());
      return bad ? 1 : 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
