#pragma once

#include "lifted/linalg.hpp"
#include "lifted/measure.hpp"

namespace lifted {

struct LassoOptions {
  int max_iter = 20000;
  /// Stop when ||x_{k+1} - x_k|| <= tol * max(1, ||x_k||).
  double tol = 1e-10;
};

struct LassoResult {
  Vector x_hat;
  int iterations = 0;
  bool converged = false;
};

/// min_x ||y - A x||^2 s.t. ||x||_1 <= l1_radius, by projected gradient with
/// step 1/L, L = 2 ||A||_2^2. Throws DomainError for a negative radius.
LassoResult generalized_lasso(const Ensemble& ensemble, double l1_radius,
                              const LassoOptions& options = {});

/// Unit top eigenvector of (1/m) sum_i y_i (a_i a_i^T - I), sign-normalized.
/// Throws ZeroMatrix when that matrix has spectral norm <= 1e-12.
Vector spectral_baseline(const Ensemble& ensemble);

}  // namespace lifted
