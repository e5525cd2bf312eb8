#include "lifted/rounding.hpp"

#include <algorithm>
#include <cmath>

#include "lifted/error.hpp"

namespace lifted {

namespace {

RoundedEstimate top_component(const Matrix& S) {
  const auto eig = symmetric_eigen(S);
  const Eigen::Index top = eig.values.size() - 1;
  RoundedEstimate out;
  out.lambda1 = eig.values(top);
  if (out.lambda1 <= 1e-12) {
    out.x_hat = Vector::Zero(S.rows());
    out.zero = true;
    return out;
  }
  Vector v = eig.vectors.col(top);
  normalize_sign(v);
  out.x_hat = std::sqrt(out.lambda1) * v;
  return out;
}

}  // namespace

RoundedEstimate spectral_round(const Matrix& X_hat) {
  if (X_hat.rows() != X_hat.cols() || X_hat.rows() == 0) throw DimensionError("spectral_round: X must be square");
  require_symmetric(X_hat, 1e-8 * std::max(1.0, X_hat.cwiseAbs().maxCoeff()), "spectral_round");
  const Matrix S = symmetrize(X_hat);
  if (symmetric_eigenvalues(S).minCoeff() < -1e-6) {
    throw DomainError("spectral_round: estimate is not positive semidefinite");
  }
  return top_component(S);
}

RecoveryMetrics recovery_metrics(const Matrix& X_hat, const Signal& signal, double mu_q) {
  const int n = signal.dim();
  if (X_hat.rows() != n || X_hat.cols() != n) throw DimensionError("recovery_metrics: X must be n x n");
  RecoveryMetrics out;
  out.frob_error = (X_hat - mu_q * signal.lifted()).norm();
  // Estimates of a negative mu_q live in the mirrored cone.
  const double sign = mu_q < 0.0 ? -1.0 : 1.0;
  const RoundedEstimate r = top_component(symmetrize(sign * X_hat));
  out.lambda1 = std::max(r.lambda1, 0.0);
  const double norm = r.x_hat.norm();
  out.correlation = norm > 0.0 ? std::min(1.0, std::fabs(r.x_hat.dot(signal.x0)) / norm) : 0.0;
  if (mu_q > 0.0) {
    const Vector target = std::sqrt(mu_q) * signal.x0;
    out.vec_error = std::min((r.x_hat - target).norm(), (r.x_hat + target).norm());
  }
  return out;
}

RecoveryMetrics direction_metrics(const Vector& x_hat, const Signal& signal, double scale) {
  if (x_hat.size() != signal.dim()) throw DimensionError("direction_metrics: length mismatch");
  const double norm = x_hat.norm();
  const Vector u = norm > 0.0 ? Vector(x_hat / norm) : Vector::Zero(x_hat.size());
  return recovery_metrics(scale * u * u.transpose(), signal, scale);
}

}  // namespace lifted
