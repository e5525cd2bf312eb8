#include "lifted/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lifted/error.hpp"

namespace lifted {

ConstraintSet ConstraintSet::psd_trace_cap(double cap) {
  if (!(cap >= 0.0)) throw DomainError("trace cap must be nonnegative");
  return {ConstraintKind::psd_trace_cap, cap};
}

ConstraintSet ConstraintSet::l1_ball(double radius) {
  if (!(radius >= 0.0)) throw DomainError("l1 radius must be nonnegative");
  return {ConstraintKind::l1_ball, radius};
}

Matrix ConstraintSet::project(const Matrix& S) const {
  switch (kind) {
    case ConstraintKind::psd: return project_psd(S);
    case ConstraintKind::psd_trace_cap: return project_trace_capped_psd(S, bound);
    case ConstraintKind::l1_ball: return project_l1_ball(S, bound);
    case ConstraintKind::halfspace_trace: return project_halfspace_trace(S, bound);
  }
  return S;
}

double ConstraintSet::distance(const Matrix& S) const { return (S - project(S)).norm(); }

double water_filling_threshold(std::span<const double> values, double target) {
  if (values.empty()) return 0.0;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  if (target <= 0.0) return v.front();
  double prefix = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    prefix += v[j];
    const double candidate = (prefix - target) / static_cast<double>(j + 1);
    if (v[j] > candidate) {
      theta = candidate;
    } else {
      break;
    }
  }
  return std::max(theta, 0.0);
}

Vector project_capped_simplex(const Vector& values, double cap) {
  if (!(cap >= 0.0)) throw DomainError("capped simplex: cap must be nonnegative");
  Vector clamped = values.cwiseMax(0.0);
  if (clamped.sum() <= cap) return clamped;
  const double theta = water_filling_threshold({clamped.data(), static_cast<std::size_t>(clamped.size())}, cap);
  return (clamped.array() - theta).cwiseMax(0.0).matrix();
}

namespace {

Matrix reassemble(const EigenDecomposition& eig, const Vector& values) {
  const Eigen::Index n = values.size();
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < n; ++i) keep += values(i) > 0.0;
  if (keep == 0) return Matrix::Zero(n, n);
  // Ascending order: positive eigenvalues sit at the end.
  const auto V = eig.vectors.rightCols(keep);
  const Vector lam = values.tail(keep);
  Matrix out = V * lam.asDiagonal() * V.transpose();
  return symmetrize(out);
}

}  // namespace

Matrix project_psd(const Matrix& S) {
  const auto eig = symmetric_eigen(S);
  return reassemble(eig, eig.values.cwiseMax(0.0));
}

Matrix project_trace_capped_psd(const Matrix& S, double cap) {
  if (!(cap >= 0.0)) throw DomainError("project_trace_capped_psd: cap must be nonnegative");
  const auto eig = symmetric_eigen(S);
  return reassemble(eig, project_capped_simplex(eig.values, cap));
}

Vector project_vector_l1_ball(const Vector& v, double radius) {
  if (!(radius >= 0.0)) throw DomainError("l1 radius must be nonnegative");
  const Vector mag = v.cwiseAbs();
  if (mag.sum() <= radius) return v;
  const double theta = water_filling_threshold({mag.data(), static_cast<std::size_t>(mag.size())}, radius);
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double s = std::max(mag(i) - theta, 0.0);
    out(i) = v(i) < 0 ? -s : s;
  }
  return out;
}

Matrix project_l1_ball(const Matrix& M, double radius) {
  if (!(radius >= 0.0)) throw DomainError("l1 radius must be nonnegative");
  if (entrywise_l1(M) <= radius) return M;
  const Eigen::Map<const Vector> flat(M.data(), M.size());
  const Vector out = project_vector_l1_ball(flat, radius);
  return Eigen::Map<const Matrix>(out.data(), M.rows(), M.cols());
}

Matrix project_halfspace_trace(const Matrix& S, double cap) {
  const double tr = S.trace();
  if (tr <= cap || S.rows() == 0) return S;
  Matrix out = S;
  out.diagonal().array() -= (tr - cap) / static_cast<double>(S.rows());
  return out;
}

DykstraResult dykstra_intersection(const Matrix& S, std::span<const ConstraintSet> sets,
                                   const DykstraOptions& options, DykstraState* state) {
  if (!(options.tol > 0.0)) throw DomainError("dykstra_intersection: tol must be positive");
  DykstraResult result;
  if (sets.empty()) {
    result.X = S;
    result.converged = true;
    return result;
  }
  if (sets.size() == 1) {
    result.X = sets[0].project(S);
    result.cycles = 1;
    result.converged = true;
    return result;
  }
  const double tol = options.relative ? options.tol * std::max(1.0, S.norm()) : options.tol;
  std::vector<Matrix> local;
  std::vector<Matrix>& increments = state ? state->increments : local;
  bool reuse = increments.size() == sets.size();
  for (const auto& p : increments) reuse = reuse && p.rows() == S.rows() && p.cols() == S.cols();
  if (!reuse) increments.assign(sets.size(), Matrix::Zero(S.rows(), S.cols()));
  // Invariant: S = x + sum of increments.
  Matrix x = S;
  for (const auto& p : increments) x -= p;
  for (int cycle = 1; cycle <= options.max_iter; ++cycle) {
    const Matrix start = x;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const Matrix y = x + increments[i];
      x = sets[i].project(y);
      increments[i] = y - x;
    }
    result.cycles = cycle;
    if ((x - start).norm() > tol) continue;
    double residual = 0.0;
    for (std::size_t i = 0; i + 1 < sets.size(); ++i) residual = std::max(residual, sets[i].distance(x));
    result.residual = residual;
    if (residual <= tol) {
      result.X = x;
      result.converged = true;
      return result;
    }
  }
  double residual = 0.0;
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) residual = std::max(residual, sets[i].distance(x));
  result.X = x;
  result.residual = residual;
  result.converged = false;
  if (options.throw_on_failure) {
    throw NoConvergence("dykstra_intersection: residual " + std::to_string(residual) + " after " +
                        std::to_string(options.max_iter) + " cycles");
  }
  return result;
}

}  // namespace lifted
