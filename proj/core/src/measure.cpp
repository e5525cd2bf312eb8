#include "lifted/measure.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lifted/error.hpp"

namespace lifted {

Signal make_signal(int n, std::optional<int> k, std::uint64_t seed) {
  if (n < 1) throw DimensionError("make_signal: n must be positive");
  if (k && (*k < 1 || *k > n)) throw DomainError("make_signal: sparsity must lie in [1, n]");
  Rng rng(seed);
  std::vector<int> index(n);
  std::iota(index.begin(), index.end(), 0);
  const int support = k ? *k : n;
  // Partial Fisher-Yates: the first `support` slots are a uniform subset.
  for (int i = 0; i < support; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(index[i], index[j]);
  }
  Vector x = Vector::Zero(n);
  do {
    for (int i = 0; i < support; ++i) x(index[i]) = rng.normal();
  } while (x.norm() == 0.0);
  x /= x.norm();
  return {x, k};
}

Signal basis_signal(int n, int index) {
  if (index < 0 || index >= n) throw DimensionError("basis_signal: index out of range");
  Vector x = Vector::Zero(n);
  x(index) = 1.0;
  return {x, 1};
}

Signal signal_from(const Vector& x0, std::optional<int> sparsity) {
  if (x0.size() == 0) throw DimensionError("signal_from: empty vector");
  if (std::fabs(x0.norm() - 1.0) > 1e-12) throw DomainError("signal_from: x0 must have unit norm");
  if (sparsity) {
    const int nnz = static_cast<int>((x0.array() != 0.0).count());
    if (nnz != *sparsity) throw DomainError("signal_from: sparsity does not match the nonzero count");
  }
  return {x0, sparsity};
}

DesignMatrix sample_design(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw DimensionError("sample_design: m and n must be positive");
  Rng rng(seed);
  DesignMatrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
  return A;
}

Vector generate_observations(const DesignMatrix& design, const Signal& signal,
                             const LinkFunction& link, std::uint64_t seed) {
  if (design.cols() != signal.dim()) throw DimensionError("generate_observations: signal length does not match design");
  const Vector u = design * signal.x0;
  Vector y(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (link.kind == LinkKind::deterministic) {
      y(i) = link.eval(u(i));
    } else {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      y(i) = link.sample(u(i), rng);
    }
  }
  return y;
}

Ensemble simulate_ensemble(const LinkFunction& link, const Signal& signal, int m,
                           std::uint64_t seed, int offset_count) {
  if (offset_count < 0 || (offset_count > 0 && offset_count >= m)) {
    throw DomainError("simulate_ensemble: offset_count must lie in [0, m)");
  }
  Ensemble e;
  e.design = sample_design(m, signal.dim(), derive_seed(seed, 0));
  e.y = generate_observations(e.design, signal, link, derive_seed(seed, 1));
  e.link_id = link.id;
  e.seed = seed;
  e.signal = signal;
  e.offset_count = offset_count;
  return e;
}

namespace {

void check_square(const DesignMatrix& design, const Matrix& X, const char* what) {
  if (X.rows() != X.cols() || X.rows() != design.cols()) {
    throw DimensionError(std::string(what) + ": X must be n x n with n = design columns");
  }
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  require_symmetric(X, 1e-10 * scale, what);
}

}  // namespace

Vector apply_phaselift_operator(const DesignMatrix& design, const Matrix& X) {
  check_square(design, X, "apply_phaselift_operator");
  const DesignMatrix AX = design * X;
  return AX.cwiseProduct(design).rowwise().sum();
}

Vector apply_lifted_operator(const DesignMatrix& design, const Matrix& X) {
  Vector out = apply_phaselift_operator(design, X);
  out.array() -= X.trace();
  return out;
}

Matrix adjoint_phaselift_operator(const DesignMatrix& design, const Vector& r) {
  if (r.size() != design.rows()) throw DimensionError("adjoint operator: r length does not match design rows");
  const DesignMatrix weighted = r.asDiagonal() * design;
  Matrix out = design.transpose() * weighted;
  return symmetrize(out);
}

Matrix adjoint_lifted_operator(const DesignMatrix& design, const Vector& r) {
  Matrix out = adjoint_phaselift_operator(design, r);
  out.diagonal().array() -= r.sum();
  return out;
}

McEstimate expected_excess_loss_mc(const Signal& signal, const LinkFunction& link,
                                   const ModelMoments& moments, const Matrix& X, int m,
                                   int trials, std::uint64_t seed) {
  if (trials < 100) throw DomainError("expected_excess_loss_mc: need at least 100 trials");
  const Matrix target = moments.mu_q * signal.lifted();
  double sum = 0, sum2 = 0;
  for (int t = 0; t < trials; ++t) {
    const Ensemble e = simulate_ensemble(link, signal, m, derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double l_star = (e.y - apply_lifted_operator(e.design, target)).squaredNorm();
    const double l_x = (e.y - apply_lifted_operator(e.design, X)).squaredNorm();
    const double d = l_star - l_x;
    sum += d;
    sum2 += d * d;
  }
  const double mean = sum / trials;
  const double var = std::max(sum2 / trials - mean * mean, 0.0) * trials / (trials - 1.0);
  return {mean, std::sqrt(var / trials)};
}

}  // namespace lifted
