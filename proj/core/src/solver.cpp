#include "lifted/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lifted/error.hpp"
#include "lifted/projections.hpp"
#include "lifted/rng.hpp"

namespace lifted {

namespace {

Vector forward(const DesignMatrix& A, const Matrix& X, bool centered) {
  const DesignMatrix AX = A * X;
  Vector out = AX.cwiseProduct(A).rowwise().sum();
  if (centered) out.array() -= X.trace();
  return out;
}

Matrix adjoint(const DesignMatrix& A, const Vector& r, bool centered) {
  const DesignMatrix W = r.asDiagonal() * A;
  Matrix out = A.transpose() * W;
  out = symmetrize(out);
  if (centered) out.diagonal().array() -= r.sum();
  return out;
}

// The program in mirrored coordinates X' = sign X, where the cone is X' >= 0.
struct Problem {
  DesignMatrix A;
  Vector target;
  bool centered = true;
  double sign = 1.0;
  double cap = 0.0;
  double penalty = 0.0;
  std::optional<double> radius;
  std::vector<ConstraintSet> sets;

  double value(const Vector& residual, const Matrix& X) const {
    return residual.squaredNorm() + penalty * X.trace();
  }
  Vector residual(const Matrix& X) const { return target - forward(A, X, centered); }
  Matrix gradient(const Vector& residual) const {
    Matrix g = -2.0 * adjoint(A, residual, centered);
    if (penalty > 0.0) g.diagonal().array() += penalty;
    return g;
  }
};

Problem build_problem(const ProgramSpec& spec, const Ensemble& ensemble) {
  const int m = ensemble.rows();
  const int n = ensemble.dim();
  if (m < 1 || n < 1) throw DimensionError("solve_lifted: empty ensemble");
  if (ensemble.y.size() != m) throw DimensionError("solve_lifted: y length does not match design rows");
  if (!std::isfinite(spec.mu_tilde)) throw ConfigError("mu_tilde must be finite");
  if (!(spec.trace_penalty >= 0.0)) throw ConfigError("trace_penalty must be nonnegative");
  if (spec.trace_penalty == 0.0 && spec.mu_tilde == 0.0) throw ConfigError("mu_tilde must be nonzero");
  if (spec.l1_radius && !(*spec.l1_radius >= 0.0)) throw ConfigError("l1 radius must be nonnegative");

  Problem p;
  p.centered = spec.loss != LossKind::phaselift;
  p.sign = spec.mu_tilde < 0.0 ? -1.0 : 1.0;
  p.cap = std::fabs(spec.mu_tilde);
  p.penalty = spec.trace_penalty;
  p.radius = spec.l1_radius;

  int first = 0;
  double shift = 0.0;
  if (spec.loss == LossKind::mean_offset) {
    if (spec.mu0_hat) {
      shift = *spec.mu0_hat;
    } else {
      int count = ensemble.offset_count;
      if (count == 0) {
        if (!(spec.offset_fraction > 0.0 && spec.offset_fraction < 1.0)) {
          throw ConfigError("offset_fraction must lie in (0, 1)");
        }
        count = std::max(1, static_cast<int>(std::lround(spec.offset_fraction * m)));
      }
      if (count >= m) throw DimensionError("solve_lifted: offset sample leaves no rows to fit");
      shift = ensemble.y.head(count).mean();
      first = count;
    }
  }
  p.A = ensemble.design.bottomRows(m - first);
  p.target = p.sign * (ensemble.y.tail(m - first).array() - shift).matrix();

  if (p.radius) p.sets.push_back(ConstraintSet::l1_ball(*p.radius));
  p.sets.push_back(p.penalty > 0.0 ? ConstraintSet::psd() : ConstraintSet::psd_trace_cap(p.cap));
  return p;
}

struct Projector {
  const Problem& problem;
  DykstraOptions options;
  int inexact = 0;
  long cycles = 0;
  DykstraState state;

  Matrix operator()(const Matrix& S) {
    const auto result = dykstra_intersection(S, problem.sets, options, &state);
    if (!result.converged) ++inexact;
    cycles += result.cycles;
    return result.X;
  }
};

double power_lipschitz(const DesignMatrix& A, bool centered) {
  if (A.rows() < 1 || A.cols() < 1) throw DimensionError("estimate_lipschitz: empty design");
  const int n = static_cast<int>(A.cols());
  Rng rng(0x9d2c5680u);
  Matrix X(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) X(i, j) = X(j, i) = rng.normal();
  X /= X.norm();
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    const Matrix Y = adjoint(A, forward(A, X, centered), centered);
    const double next = Y.norm();
    if (next == 0.0) return 0.0;
    X = Y / next;
    if (it > 0 && std::fabs(next - lambda) < 1e-4 * next) return 2.0 * next;
    lambda = next;
  }
  throw NoConvergence("estimate_lipschitz: power iteration did not settle in 500 iterations");
}

double feasibility(const Problem& p, const Matrix& X) {
  const double lmin = symmetric_eigenvalues(X).minCoeff();
  double v = std::max(0.0, -lmin);
  if (p.penalty == 0.0) v = std::max(v, X.trace() - p.cap);
  if (p.radius) v = std::max(v, entrywise_l1(X) - *p.radius);
  return v;
}

}  // namespace

double objective(const ProgramSpec& spec, const Ensemble& ensemble, const Matrix& X) {
  const Problem p = build_problem(spec, ensemble);
  if (X.rows() != ensemble.dim() || X.cols() != ensemble.dim()) {
    throw DimensionError("objective: X must be n x n");
  }
  const Matrix Xm = p.sign * X;
  return p.value(p.residual(Xm), Xm);
}

double estimate_lipschitz(const DesignMatrix& design, LossKind loss) {
  return power_lipschitz(design, loss != LossKind::phaselift);
}

SolverReport solve_lifted(const ProgramSpec& spec, const Ensemble& ensemble, const SolverOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (options.max_iter < 0) throw ConfigError("max_iter must be nonnegative");
  if (!(options.rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
  if (options.window < 1) throw ConfigError("window must be positive");
  const Problem p = build_problem(spec, ensemble);
  const int n = ensemble.dim();

  Projector project{p, {options.dykstra_tol, true, options.dykstra_max_iter, false}, 0, 0, {}};

  Matrix X = Matrix::Zero(n, n);
  if (options.initial) {
    if (options.initial->rows() != n || options.initial->cols() != n) {
      throw DimensionError("solve_lifted: initial X must be n x n");
    }
    require_symmetric(*options.initial, 1e-10 * std::max(1.0, options.initial->cwiseAbs().maxCoeff()),
                      "solve_lifted");
    X = project(p.sign * symmetrize(*options.initial));
  }

  SolverReport report;
  Vector r = p.residual(X);
  double f = p.value(r, X);
  report.objective.push_back(f);

  StepPolicy policy = options.step;
  if (options.max_iter > 0) {
    report.lipschitz = power_lipschitz(p.A, p.centered);
    if (!(report.lipschitz > 0.0)) policy = StepPolicy::backtracking;
  }
  double step = report.lipschitz > 0.0 ? 1.0 / (options.lipschitz_safety * report.lipschitz) : 1.0;

  if (options.algorithm == Algorithm::three_operator && p.sets.size() == 2 && options.max_iter > 0) {
    // z is the governing sequence; xb lies in the l1 ball, xa in the cone.
    const double gamma = report.lipschitz > 0.0 ? 1.0 / (options.lipschitz_safety * report.lipschitz) : 1.0;
    Matrix z = X;
    Matrix xa = X;
    report.status = SolveStatus::max_iter;
    int it = 0;
    while (it < options.max_iter) {
      ++it;
      const Matrix xb = p.sets[0].project(z);
      const Vector rb = p.residual(xb);
      xa = p.sets[1].project(2.0 * xb - z - gamma * p.gradient(rb));
      z += xa - xb;
      const double gap = (xa - xb).norm();
      // Tracked at xb, whose residual the gradient already needed.
      report.objective.push_back(p.value(rb, xb));
      const int w = options.window;
      if (it >= w) {
        const double now = report.objective.back();
        const double before = report.objective[report.objective.size() - 1 - w];
        const bool flat = std::fabs(before - now) < options.rel_tol * std::max(std::fabs(before), std::numeric_limits<double>::min());
        if ((flat || now == 0.0) && gap <= options.splitting_tol * std::max(1.0, xa.norm())) {
          report.status = SolveStatus::converged;
          break;
        }
      }
    }
    // Close the remaining splitting gap with one exact projection.
    X = project(xa);
    r = p.residual(X);
    report.objective.push_back(p.value(r, X));
    report.iterations = it;
    report.step_size = gamma;
    report.inexact_projections = project.inexact;
    report.projection_cycles = project.cycles;
    report.feasibility_residual = feasibility(p, X);
    report.X_hat = p.sign * X;
    const Vector eig = symmetric_eigenvalues(report.X_hat);
    report.min_eigenvalue = eig.minCoeff();
    report.trace = report.X_hat.trace();
    report.l1_norm = entrywise_l1(report.X_hat);
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
  }

  Matrix best = X;
  double best_f = f;
  report.status = SolveStatus::converged;
  bool done = options.max_iter == 0;
  int it = 0;
  while (!done) {
    if (it == options.max_iter) {
      report.status = SolveStatus::max_iter;
      break;
    }
    ++it;
    const Matrix g = p.gradient(r);
    Matrix next;
    Vector r_next;
    double f_next;
    if (policy == StepPolicy::fixed) {
      next = project(X - step * g);
      r_next = p.residual(next);
      f_next = p.value(r_next, next);
    } else {
      double trial = step / options.backtrack_beta;
      for (int k = 0;; ++k) {
        next = project(X - trial * g);
        r_next = p.residual(next);
        f_next = p.value(r_next, next);
        const double moved = (next - X).squaredNorm();
        if (f_next <= f - options.armijo_c / trial * moved || k == 60) break;
        trial *= options.backtrack_beta;
      }
      step = trial;
    }
    const bool stalled = (next - X).norm() == 0.0;
    X = std::move(next);
    r = std::move(r_next);
    f = f_next;
    report.objective.push_back(f);
    if (f < best_f) {
      best_f = f;
      best = X;
    }
    if (f == 0.0 || stalled) break;
    const int w = options.window;
    if (it >= w) {
      const double before = report.objective[report.objective.size() - 1 - w];
      const double decrease = before - f;
      if (decrease < options.rel_tol * std::max(std::fabs(before), std::numeric_limits<double>::min())) break;
    }
  }

  report.iterations = it;
  report.step_size = step;
  report.inexact_projections = project.inexact;
  report.projection_cycles = project.cycles;
  report.feasibility_residual = feasibility(p, best);
  report.X_hat = p.sign * best;
  const Vector eig = symmetric_eigenvalues(report.X_hat);
  report.min_eigenvalue = eig.minCoeff();
  report.trace = report.X_hat.trace();
  report.l1_norm = entrywise_l1(report.X_hat);
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace lifted
