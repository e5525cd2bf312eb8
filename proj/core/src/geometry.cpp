#include "lifted/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lifted/error.hpp"
#include "lifted/projections.hpp"

namespace lifted {

Matrix sample_goe(int n, Rng& rng) {
  if (n < 1) throw DimensionError("sample_goe: n must be positive");
  Matrix G(n, n);
  const double off = std::sqrt(0.5);
  for (int j = 0; j < n; ++j) {
    G(j, j) = rng.normal();
    for (int i = j + 1; i < n; ++i) G(i, j) = G(j, i) = off * rng.normal();
  }
  return G;
}

Matrix sample_goe(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_goe(n, rng);
}

WeightVector sample_noise_weights(const LinkFunction& link, double mu, int m, std::uint64_t seed) {
  if (m < 1) throw DimensionError("sample_noise_weights: m must be positive");
  Rng rng(seed);
  Vector p(m);
  for (int i = 0; i < m; ++i) {
    const double g = rng.normal();
    p(i) = link(g, rng) - mu * (g * g - 1.0);
  }
  return {p, WeightProvenance::noise_eta};
}

namespace {

void check_weights(const WeightVector& p) {
  if (p.size() < 1) throw DimensionError("weight vector must be nonempty");
  if (!p.p.allFinite()) throw DomainError("weight vector has non-finite entries");
}

// sum_i p_i eps_i a_i a_i^T for fresh a_i, eps_i.
Matrix weighted_outer_sum(int n, const Vector& p, Rng& rng) {
  const Eigen::Index m = p.size();
  DesignMatrix A(m, n);
  Vector w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
    w(i) = p(i) * rng.rademacher();
  }
  const DesignMatrix W = w.asDiagonal() * A;
  Matrix out = A.transpose() * W;
  return symmetrize(out);
}

struct Accumulator {
  double sum = 0, sum2 = 0;
  int count = 0;
  void add(double v) {
    sum += v;
    sum2 += v * v;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double se() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(sum2 / count - m * m, 0.0) / (count - 1.0));
  }
};

// sqrt(mean) with a delta-method standard error.
WidthEstimate root_of_mean(const Accumulator& acc, WidthMethod method) {
  WidthEstimate out;
  out.trials = acc.count;
  out.method = method;
  out.upper_bound = true;
  const double v = std::max(acc.mean(), 0.0);
  out.value = std::sqrt(v);
  out.std_error = out.value > 0.0 ? acc.se() / (2.0 * out.value) : 0.0;
  return out;
}

void check_trials(int trials) {
  if (trials < 1) throw DomainError("trials must be positive");
}

// Orthogonal Q whose first column is x (unit): a Householder reflector.
Matrix frame_with_first_column(const Vector& x) {
  const Eigen::Index n = x.size();
  Vector v = x;
  v(0) -= 1.0;
  const double vv = v.squaredNorm();
  Matrix Q = Matrix::Identity(n, n);
  if (vv > 1e-30) Q -= 2.0 * v * v.transpose() / vv;
  return Q;
}

Vector block_signal(int n, int k) {
  Vector x = Vector::Zero(n);
  x.head(k).setConstant(1.0 / std::sqrt(static_cast<double>(k)));
  return x;
}

}  // namespace

Matrix sample_weighted_H(int n, const WeightVector& p, Rng& rng) {
  if (n < 1) throw DimensionError("sample_weighted_H: n must be positive");
  check_weights(p);
  return weighted_outer_sum(n, p.p, rng) / std::sqrt(static_cast<double>(p.size()));
}

Matrix sample_weighted_H(int n, const WeightVector& p, std::uint64_t seed) {
  Rng rng(seed);
  return sample_weighted_H(n, p, rng);
}

ConeSpec ConeSpec::full_space(int n) {
  if (n < 1) throw DimensionError("cone dimension must be positive");
  ConeSpec c;
  c.kind = ConeKind::full_space;
  c.n = n;
  return c;
}

ConeSpec ConeSpec::psd_shift(double mu, const Vector& x0) {
  if (!(mu > 0.0)) throw DomainError("psd_shift: mu must be positive");
  if (x0.size() < 1 || std::fabs(x0.norm() - 1.0) > 1e-12) throw DomainError("psd_shift: x0 must be a unit vector");
  ConeSpec c;
  c.kind = ConeKind::psd_shift;
  c.mu = mu;
  c.x0 = x0;
  c.n = static_cast<int>(x0.size());
  return c;
}

ConeSpec ConeSpec::l1_descent(int n, int k, double mu) {
  if (k < 1 || k > n) throw DomainError("l1_descent: support size must lie in [1, n]");
  if (!(mu > 0.0)) throw DomainError("l1_descent: mu must be positive");
  ConeSpec c;
  c.kind = ConeKind::l1_descent;
  c.mu = mu;
  c.n = n;
  c.k = k;
  c.x0 = block_signal(n, k);
  return c;
}

ConeSpec ConeSpec::intersection(int n, int k, double mu) {
  ConeSpec c = l1_descent(n, k, mu);
  c.kind = ConeKind::intersection;
  return c;
}

ConeSpec ConeSpec::fixed_subspace(int n, std::vector<Matrix> basis) {
  if (n < 1) throw DimensionError("cone dimension must be positive");
  for (const auto& B : basis) {
    if (B.rows() != n || B.cols() != n) throw DimensionError("fixed_subspace: basis element has wrong shape");
  }
  ConeSpec c;
  c.kind = ConeKind::fixed_subspace;
  c.n = n;
  c.basis = std::move(basis);
  return c;
}

ConeSpec ConeSpec::support_subspace(int n, int k) {
  if (k < 1 || k > n) throw DomainError("support_subspace: k must lie in [1, n]");
  std::vector<Matrix> basis;
  for (int i = 0; i < k; ++i) {
    Matrix E = Matrix::Zero(n, n);
    E(i, i) = 1.0;
    basis.push_back(E);
    for (int j = i + 1; j < k; ++j) {
      Matrix F = Matrix::Zero(n, n);
      F(i, j) = F(j, i) = std::sqrt(0.5);
      basis.push_back(F);
    }
  }
  return fixed_subspace(n, std::move(basis));
}

Matrix project_onto_cone(const ConeSpec& cone, const Matrix& W) {
  if (W.rows() != cone.n || W.cols() != cone.n) throw DimensionError("project_onto_cone: shape mismatch");
  switch (cone.kind) {
    case ConeKind::full_space: return symmetrize(W);
    case ConeKind::fixed_subspace: {
      Matrix out = Matrix::Zero(cone.n, cone.n);
      for (const auto& B : cone.basis) out += frobenius_inner(W, B) * B;
      return out;
    }
    case ConeKind::psd_shift: {
      const Matrix X0 = cone.mu * cone.x0 * cone.x0.transpose();
      return project_trace_capped_psd(symmetrize(X0 + W), cone.mu) - X0;
    }
    default: throw UnsupportedCone("project_onto_cone: cone has no Euclidean projection here");
  }
}

double sparse_width_bound(int k, int n) {
  if (k < 1 || k >= n) throw DomainError("sparse_width_bound: need 1 <= k < n");
  return 3.0 * std::sqrt(2.0) * k * std::sqrt(std::log(static_cast<double>(n) / k));
}

double sparse_polar_objective(const Matrix& H, int k, double lambda) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      const double h = H(i, j);
      if (i < k && j < k) {
        total += (h - lambda) * (h - lambda);
      } else {
        const double s = std::max(std::fabs(h) - lambda, 0.0);
        total += s * s;
      }
    }
  }
  return total;
}

PolarMinimum minimize_sparse_polar(const Matrix& H, int k, int iterations) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = H.size() ? H.cwiseAbs().maxCoeff() : 0.0;
  auto f = [&](double l) { return sparse_polar_objective(H, k, l); };
  PolarMinimum best{f(a), a};
  const double fb = f(b);
  if (fb < best.value) best = {fb, b};
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  if (fc < best.value) best = {fc, c};
  if (fd < best.value) best = {fd, d};
  return best;
}

double prescribed_sparse_lambda(int n, int k, const WeightVector& p, double psi) {
  if (k < 1 || k > n) throw DomainError("prescribed_sparse_lambda: k must lie in [1, n]");
  check_weights(p);
  const double L = std::log(static_cast<double>(n) * n / (static_cast<double>(k) * k));
  const double m = static_cast<double>(p.size());
  return psi / std::sqrt(m) * (p.p.norm() * std::sqrt(L) + p.p.cwiseAbs().maxCoeff() * L);
}

namespace {

// t with mean exp(|x|/t) = 2, by bisection in log space.
double orlicz_psi1(const std::vector<double>& x) {
  double amax = 0.0;
  for (double v : x) amax = std::max(amax, std::fabs(v));
  if (amax == 0.0) return 0.0;
  auto log_mean_exp = [&](double t) {
    double s = 0.0;
    for (double v : x) s += std::exp((std::fabs(v) - amax) / t);
    return amax / t + std::log(s / x.size());
  };
  const double target = std::log(2.0);
  double lo = amax * 1e-6, hi = amax;
  while (log_mean_exp(hi) > target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_mean_exp(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

double estimate_subexponential_norm(int samples, std::uint64_t seed) {
  if (samples < 2) throw DomainError("estimate_subexponential_norm: need at least 2 samples");
  Rng rng(seed);
  std::vector<double> cross(samples), square(samples);
  for (int i = 0; i < samples; ++i) {
    const double e = rng.rademacher();
    const double a1 = rng.normal(), a2 = rng.normal();
    cross[i] = e * a1 * a2;
    square[i] = rng.rademacher() * a1 * a1;
  }
  return std::max(orlicz_psi1(cross), orlicz_psi1(square));
}

WidthEstimate gaussian_width_mc(const ConeSpec& cone, double t, int trials, std::uint64_t seed) {
  if (!(t > 0.0)) throw DomainError("gaussian_width_mc: t must be positive");
  check_trials(trials);
  if (cone.kind == ConeKind::intersection) {
    throw UnsupportedCone("gaussian_width_mc: use the polarity bounds for the intersection cone");
  }
  if (cone.kind == ConeKind::l1_descent) {
    Accumulator acc;
    for (int i = 0; i < trials; ++i) {
      const Matrix G = sample_goe(cone.n, derive_seed(seed, static_cast<std::uint64_t>(i)));
      acc.add(minimize_sparse_polar(G, cone.k).value);
    }
    WidthEstimate out = root_of_mean(acc, WidthMethod::polarity_closed_form);
    out.value *= t;
    out.std_error *= t;
    out.scale = t;
    return out;
  }
  Accumulator acc;
  for (int i = 0; i < trials; ++i) {
    const Matrix G = sample_goe(cone.n, derive_seed(seed, static_cast<std::uint64_t>(i)));
    if (cone.kind == ConeKind::psd_shift) {
      const Matrix P = project_onto_cone(cone, t * G);
      const double norm = P.norm();
      acc.add(norm > 0.0 ? t * frobenius_inner(G, P) / norm : 0.0);
    } else {
      acc.add(t * project_onto_cone(cone, G).norm());
    }
  }
  WidthEstimate out;
  out.value = std::max(acc.mean(), 0.0);
  out.std_error = acc.se();
  out.trials = trials;
  out.scale = t;
  out.method = WidthMethod::mc_projection;
  out.scale_specific = cone.kind == ConeKind::psd_shift;
  return out;
}

WidthEstimate empirical_width_polar_sparse(int n, int k, int m, const WeightVector& p,
                                           SparseLambdaPolicy policy, int trials, std::uint64_t seed) {
  if (k < 1 || k > n) throw DomainError("empirical_width_polar_sparse: k must lie in [1, n]");
  if (p.size() != m) throw DimensionError("empirical_width_polar_sparse: weight length must equal m");
  check_trials(trials);
  const double lambda =
      policy.kind == SparseLambdaPolicy::Kind::prescribed ? prescribed_sparse_lambda(n, k, p, policy.psi) : 0.0;
  Accumulator acc;
  for (int i = 0; i < trials; ++i) {
    const Matrix H = sample_weighted_H(n, p, derive_seed(seed, static_cast<std::uint64_t>(i)));
    acc.add(policy.kind == SparseLambdaPolicy::Kind::optimize ? minimize_sparse_polar(H, k).value
                                                               : sparse_polar_objective(H, k, lambda));
  }
  return root_of_mean(acc, WidthMethod::polarity_closed_form);
}

double psd_polar_sample(const Matrix& H) {
  const Eigen::Index n = H.rows();
  if (n < 2 || H.cols() != n) throw DimensionError("psd_polar_sample: need a square matrix with n >= 2");
  const double top = symmetric_eigenvalues(H.bottomRightCorner(n - 1, n - 1)).maxCoeff();
  const double gap = H(0, 0) - top;
  return gap * gap + 2.0 * H.col(0).tail(n - 1).squaredNorm();
}

WidthEstimate empirical_width_polar_psd(int n, int m, const WeightVector& p, int trials, std::uint64_t seed) {
  if (n < 2) throw DimensionError("empirical_width_polar_psd: n must be at least 2");
  if (p.size() != m) throw DimensionError("empirical_width_polar_psd: weight length must equal m");
  check_trials(trials);
  Accumulator acc;
  for (int i = 0; i < trials; ++i) {
    acc.add(psd_polar_sample(sample_weighted_H(n, p, derive_seed(seed, static_cast<std::uint64_t>(i)))));
  }
  return root_of_mean(acc, WidthMethod::polarity_closed_form);
}

WidthEstimate empirical_width_polar_intersection(int n, int k, int m, const WeightVector& p, int trials,
                                                 std::uint64_t seed) {
  if (n < 2) throw DimensionError("empirical_width_polar_intersection: n must be at least 2");
  if (k < 1 || k > n) throw DomainError("empirical_width_polar_intersection: k must lie in [1, n]");
  if (p.size() != m) throw DimensionError("empirical_width_polar_intersection: weight length must equal m");
  check_trials(trials);
  // Both bounds are taken at the same x0 = 1_k / sqrt(k); the psd bound is
  // evaluated in a frame whose first axis is x0.
  const Matrix Q = frame_with_first_column(block_signal(n, k));
  Accumulator acc;
  for (int i = 0; i < trials; ++i) {
    const Matrix H = sample_weighted_H(n, p, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const double psd = psd_polar_sample(Q.transpose() * H * Q);
    const double sparse = minimize_sparse_polar(H, k).value;
    acc.add(std::min(psd, sparse));
  }
  return root_of_mean(acc, WidthMethod::polarity_closed_form);
}

double restricted_injectivity_mc(int n, int m, const ConeSpec& cone, int direction_samples, std::uint64_t seed) {
  if (cone.n != n) throw DimensionError("restricted_injectivity_mc: cone dimension must equal n");
  if (direction_samples < 1) throw DomainError("restricted_injectivity_mc: need at least one direction");
  if (cone.kind == ConeKind::l1_descent || cone.kind == ConeKind::intersection) {
    throw UnsupportedCone("restricted_injectivity_mc: cone has no Euclidean projection here");
  }
  const DesignMatrix A = sample_design(m, n, derive_seed(seed, 0));
  double best = INFINITY;
  for (int j = 0; j < direction_samples; ++j) {
    const Matrix G = sample_goe(n, derive_seed(seed, {1, static_cast<std::uint64_t>(j)}));
    Matrix V = project_onto_cone(cone, G);
    const double norm = V.norm();
    if (norm < 1e-12) continue;
    V /= norm;
    best = std::min(best, apply_lifted_operator(A, symmetrize(V)).norm() / std::sqrt(static_cast<double>(m)));
  }
  if (!std::isfinite(best)) throw EmptyCone("restricted_injectivity_mc: every sampled direction vanished");
  return best;
}

McEstimate spectral_norm_weighted_sum(int n, const WeightVector& p, int trials, std::uint64_t seed) {
  if (n < 1) throw DimensionError("spectral_norm_weighted_sum: n must be positive");
  check_weights(p);
  check_trials(trials);
  Accumulator acc;
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Vector ev = symmetric_eigenvalues(weighted_outer_sum(n, p.p, rng));
    acc.add(std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1))));
  }
  return {acc.mean(), acc.se()};
}

}  // namespace lifted
