#pragma once

#include <span>
#include <vector>

#include "lifted/linalg.hpp"

namespace lifted {

enum class ConstraintKind { psd, psd_trace_cap, l1_ball, halfspace_trace };

/// A closed convex subset of the symmetric matrices with a Frobenius projection.
struct ConstraintSet {
  ConstraintKind kind = ConstraintKind::psd;
  /// Trace cap or l1 radius; unused for psd.
  double bound = 0.0;

  static ConstraintSet psd() { return {ConstraintKind::psd, 0.0}; }
  static ConstraintSet psd_trace_cap(double cap);
  static ConstraintSet l1_ball(double radius);
  static ConstraintSet halfspace_trace(double cap) { return {ConstraintKind::halfspace_trace, cap}; }

  Matrix project(const Matrix& S) const;
  /// ||S - project(S)||_F
  double distance(const Matrix& S) const;
};

/// Clamp negative eigenvalues to zero.
Matrix project_psd(const Matrix& S);
/// Projection onto {X >= 0, tr X <= cap} by projecting the spectrum onto the
/// capped simplex.
Matrix project_trace_capped_psd(const Matrix& S, double cap);
/// Entrywise soft-thresholding onto {||W||_1 <= radius}.
Matrix project_l1_ball(const Matrix& M, double radius);
Vector project_vector_l1_ball(const Vector& v, double radius);
/// {X : tr X <= cap}
Matrix project_halfspace_trace(const Matrix& S, double cap);

/// Projection of a vector onto {x >= 0, sum x <= cap}.
Vector project_capped_simplex(const Vector& values, double cap);

/// The unique theta >= 0 with sum_i max(v_i - theta, 0) = target, for
/// nonnegative v with sum v > target. Exact sort-and-scan.
double water_filling_threshold(std::span<const double> values, double target);

struct DykstraOptions {
  /// Feasibility and step tolerance, multiplied by max(1, ||S||_F) when `relative`.
  double tol = 1e-9;
  bool relative = true;
  int max_iter = 500;
  bool throw_on_failure = true;
};

struct DykstraResult {
  Matrix X;
  int cycles = 0;
  /// max distance from X to the sets, excluding the last one (X lies in it).
  double residual = 0.0;
  bool converged = false;
};

/// Per-set correction terms carried between calls. Dykstra's method is block
/// coordinate ascent on the dual of the projection problem and converges from
/// any starting corrections, so a sequence of nearby projections (one per
/// gradient step) can reuse them.
struct DykstraState {
  std::vector<Matrix> increments;
};

/// Dykstra's alternating projections onto the intersection of `sets`,
/// visited in order. Declares convergence when the iterate moves by at most
/// tol over a cycle and lies within tol of every set. Throws NoConvergence
/// after max_iter cycles unless throw_on_failure is false. With `state`, the
/// run starts from its increments (if shapes match) and leaves the final ones.
DykstraResult dykstra_intersection(const Matrix& S, std::span<const ConstraintSet> sets,
                                   const DykstraOptions& options = {}, DykstraState* state = nullptr);

}  // namespace lifted
