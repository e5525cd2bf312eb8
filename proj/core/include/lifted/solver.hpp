#pragma once

#include <optional>
#include <vector>

#include "lifted/linalg.hpp"
#include "lifted/measure.hpp"

namespace lifted {

enum class LossKind {
  /// r_i = y_i - <a_i a_i^T - I, X>
  centered,
  /// r_i = y_i - mu0_hat - <a_i a_i^T - I, X>, mu0_hat from a held-out offset sample
  mean_offset,
  /// r_i = y_i - <a_i a_i^T, X>
  phaselift,
};

/// The lifted least-squares program.
///
/// With trace_penalty == 0 this is the constrained form
///   min sum_i r_i^2  s.t.  X >= 0, tr X <= mu_tilde, ||X||_1 <= l1_radius.
/// A negative mu_tilde selects the mirrored program over X <= 0 with trace
/// >= mu_tilde (for links with mu_q < 0). With trace_penalty > 0 the trace
/// cap is replaced by the penalty trace_penalty * tr X.
struct ProgramSpec {
  LossKind loss = LossKind::centered;
  double mu_tilde = 1.0;
  std::optional<double> l1_radius;
  double trace_penalty = 0.0;
  /// Overrides the sample estimate of mu0; all rows are then fitted.
  std::optional<double> mu0_hat;
  /// Offset-sample share used when the ensemble does not designate one.
  double offset_fraction = 0.1;
};

enum class StepPolicy { fixed, backtracking };

enum class Algorithm {
  /// X <- Pi(X - step grad), Pi the (Dykstra) projection onto all active sets.
  projected_gradient,
  /// Davis-Yin splitting: one projection onto each set per iteration, no
  /// inner loop. Same minimizer as projected_gradient; the objective need not
  /// decrease monotonically. Identical to projected_gradient with one set.
  three_operator,
};

struct SolverOptions {
  int max_iter = 5000;
  /// Stop when the objective decreased by less than rel_tol (relative) over
  /// the last `window` iterations.
  double rel_tol = 1e-8;
  int window = 20;
  StepPolicy step = StepPolicy::fixed;
  Algorithm algorithm = Algorithm::projected_gradient;
  /// three_operator stops only once its two projections agree to
  /// splitting_tol * max(1, ||X||_F).
  double splitting_tol = 1e-5;
  double backtrack_beta = 0.5;
  double armijo_c = 1e-4;
  /// Multiplier on the Lipschitz estimate for the fixed step 1 / (safety L).
  double lipschitz_safety = 1.1;
  std::optional<Matrix> initial;
  double dykstra_tol = 1e-9;
  int dykstra_max_iter = 500;
};

enum class SolveStatus { converged, max_iter };

struct SolverReport {
  Matrix X_hat;
  int iterations = 0;
  /// Objective at the (projected) initial point, then after every iteration.
  std::vector<double> objective;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  double l1_norm = 0.0;
  /// Largest constraint violation of X_hat (0 when feasible).
  double feasibility_residual = 0.0;
  double wall_time_ms = 0.0;
  double step_size = 0.0;
  double lipschitz = 0.0;
  /// Dykstra calls that hit their cycle cap.
  int inexact_projections = 0;
  /// Dykstra cycles over all projections.
  long projection_cycles = 0;
  SolveStatus status = SolveStatus::converged;
};

double objective(const ProgramSpec& spec, const Ensemble& ensemble, const Matrix& X);

/// 2 * top eigenvalue of X -> A*(A(X)) (or B*B for the phaselift loss) by
/// power iteration, stopping at relative change < 1e-4. Throws NoConvergence
/// after 500 iterations, DimensionError on an empty design.
double estimate_lipschitz(const DesignMatrix& design, LossKind loss = LossKind::centered);

/// Projected gradient descent on the program. Hitting max_iter is reported
/// through `status`, with the best iterate returned. Throws DimensionError
/// and ConfigError.
SolverReport solve_lifted(const ProgramSpec& spec, const Ensemble& ensemble,
                          const SolverOptions& options = {});

}  // namespace lifted
