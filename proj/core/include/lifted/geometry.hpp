#pragma once

#include <cstdint>
#include <vector>

#include "lifted/linalg.hpp"
#include "lifted/measure.hpp"
#include "lifted/model.hpp"

namespace lifted {

/// G = G^T with G_ii ~ N(0, 1) and G_ij ~ N(0, 1/2) for i > j.
Matrix sample_goe(int n, std::uint64_t seed);
Matrix sample_goe(int n, Rng& rng);

enum class WeightProvenance { ones, noise_eta, custom };

struct WeightVector {
  Vector p;
  WeightProvenance provenance = WeightProvenance::custom;

  static WeightVector ones(int m) { return {Vector::Ones(m), WeightProvenance::ones}; }
  static WeightVector custom(Vector p) { return {std::move(p), WeightProvenance::custom}; }
  int size() const { return static_cast<int>(p.size()); }
};

/// eta_i = f(gamma_i) - mu (gamma_i^2 - 1) for fresh gamma_i ~ N(0, 1).
WeightVector sample_noise_weights(const LinkFunction& link, double mu, int m, std::uint64_t seed);

/// H_p = (1/sqrt m) sum_i p_i eps_i a_i a_i^T with fresh Gaussian a_i and
/// Rademacher eps_i, m = p.size().
Matrix sample_weighted_H(int n, const WeightVector& p, std::uint64_t seed);
Matrix sample_weighted_H(int n, const WeightVector& p, Rng& rng);

enum class ConeKind { psd_shift, l1_descent, intersection, full_space, fixed_subspace };

/// Feasible-direction sets at mu X0.
///   psd_shift       {V : mu X0 + V >= 0, tr V <= 0}
///   l1_descent      {V : ||mu X0 + V||_1 <= ||mu X0||_1}, x0 supported on [k]
///   intersection    psd_shift and l1_descent together
///   full_space      all symmetric matrices
///   fixed_subspace  span of `basis` (Frobenius-orthonormal symmetric matrices)
struct ConeSpec {
  ConeKind kind = ConeKind::full_space;
  double mu = 1.0;
  Vector x0;
  int n = 0;
  int k = 1;
  std::vector<Matrix> basis;

  static ConeSpec full_space(int n);
  static ConeSpec psd_shift(double mu, const Vector& x0);
  static ConeSpec l1_descent(int n, int k, double mu = 1.0);
  static ConeSpec intersection(int n, int k, double mu = 1.0);
  static ConeSpec fixed_subspace(int n, std::vector<Matrix> basis);
  /// Symmetric matrices supported on the leading k x k block.
  static ConeSpec support_subspace(int n, int k);
};

/// Euclidean projection onto a projectable cone (full_space, fixed_subspace,
/// psd_shift). Throws UnsupportedCone otherwise.
Matrix project_onto_cone(const ConeSpec& cone, const Matrix& W);

enum class WidthMethod { mc_projection, polarity_closed_form, formula };

struct WidthEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int trials = 0;
  double scale = 1.0;
  WidthMethod method = WidthMethod::mc_projection;
  /// The estimate bounds the width from above rather than estimating it.
  bool upper_bound = false;
  /// psd_shift is not a cone; its estimate holds only at this scale.
  bool scale_specific = false;
};

/// Local Gaussian width E sup_{V in C, ||V||_F = t} <G, V>.
///
/// For projectable sets, each sample contributes t <G, P>/||P||_F with
/// P = Pi_C(t G); on a cone this is t ||Pi_C(G)||_F. l1_descent is routed to
/// the polarity bound with GOE samples (flagged upper_bound). Throws
/// UnsupportedCone for the intersection.
WidthEstimate gaussian_width_mc(const ConeSpec& cone, double t, int trials, std::uint64_t seed);

/// 3 sqrt(2) k sqrt(ln(n/k)). Throws DomainError unless 1 <= k < n.
double sparse_width_bound(int k, int n);

/// sum_{(i,j) in [k]^2} (h_ij - lambda)^2 + sum_{(i,j) outside} st(h_ij; lambda)^2
double sparse_polar_objective(const Matrix& H, int k, double lambda);

struct PolarMinimum {
  double value = 0.0;
  double lambda = 0.0;
};
/// Golden-section minimization of sparse_polar_objective over [0, max |h_ij|].
PolarMinimum minimize_sparse_polar(const Matrix& H, int k, int iterations = 60);

/// (psi / sqrt m) (||p||_2 sqrt(L) + ||p||_inf L), L = ln(n^2 / k^2).
double prescribed_sparse_lambda(int n, int k, const WeightVector& p, double psi);

/// Empirical sub-exponential (Orlicz psi_1) norm max{psi_1, psi_2} of
/// eps a_1 a_2 and eps a_1^2: the t solving mean exp(|X|/t) = 2 over `samples` draws.
double estimate_subexponential_norm(int samples, std::uint64_t seed);

struct SparseLambdaPolicy {
  enum class Kind { optimize, prescribed } kind = Kind::optimize;
  double psi = 0.0;

  static SparseLambdaPolicy optimize() { return {}; }
  static SparseLambdaPolicy prescribed(double psi) { return {Kind::prescribed, psi}; }
};

/// Polarity upper bound on the weighted empirical width of the l1 descent
/// cone: sqrt of the mean (over H_p samples) of the sparse polar objective.
WidthEstimate empirical_width_polar_sparse(int n, int k, int m, const WeightVector& p,
                                           SparseLambdaPolicy policy, int trials,
                                           std::uint64_t seed);

/// (h11 - lambda_max(H22))^2 + 2 ||h12||^2 for the partition at x0 = e1.
double psd_polar_sample(const Matrix& H);

/// Polarity upper bound on the weighted empirical width of psd_shift.
WidthEstimate empirical_width_polar_psd(int n, int m, const WeightVector& p, int trials,
                                        std::uint64_t seed);

/// Upper bound for the intersection cone: the smaller of the two polarity
/// bounds, computed on common H_p samples.
WidthEstimate empirical_width_polar_intersection(int n, int k, int m, const WeightVector& p,
                                                 int trials, std::uint64_t seed);

/// min over sampled unit directions V of the cone of ||A(V)||_2 / sqrt(m), for
/// one fresh m x n design. Directions are normalized cone projections of GOE
/// samples. Throws EmptyCone if every projection vanishes.
double restricted_injectivity_mc(int n, int m, const ConeSpec& cone, int direction_samples,
                                 std::uint64_t seed);

/// Mean of ||sum_i p_i eps_i a_i a_i^T||_2 over `trials` draws.
McEstimate spectral_norm_weighted_sum(int n, const WeightVector& p, int trials,
                                      std::uint64_t seed);

}  // namespace lifted
