#pragma once

#include <optional>

#include "lifted/linalg.hpp"
#include "lifted/measure.hpp"

namespace lifted {

struct RoundedEstimate {
  /// sqrt(lambda1) v1, sign-normalized.
  Vector x_hat;
  double lambda1 = 0.0;
  /// lambda1 <= 1e-12; x_hat is then zero.
  bool zero = false;
};

/// Rank-one extraction from a PSD estimate. Throws DomainError when the
/// smallest eigenvalue is below -1e-6.
RoundedEstimate spectral_round(const Matrix& X_hat);

struct RecoveryMetrics {
  /// ||X_hat - mu_q X0||_F
  double frob_error = 0.0;
  /// min over signs of ||x_hat -/+ sqrt(mu_q) x0||_2; empty when mu_q <= 0.
  std::optional<double> vec_error;
  /// |<x_hat, x0>| / ||x_hat||_2 (0 for a zero estimate)
  double correlation = 0.0;
  double lambda1 = 0.0;
};

RecoveryMetrics recovery_metrics(const Matrix& X_hat, const Signal& signal, double mu_q);

/// Metrics for a vector estimate whose scale is not meaningful: x_hat is
/// normalized to u and compared as the lifted estimate scale * u u^T.
RecoveryMetrics direction_metrics(const Vector& x_hat, const Signal& signal, double scale);

}  // namespace lifted
