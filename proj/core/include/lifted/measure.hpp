#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lifted/linalg.hpp"
#include "lifted/model.hpp"

namespace lifted {

/// Unit-norm ground truth x0. `sparsity` is empty for a dense signal.
struct Signal {
  Vector x0;
  std::optional<int> sparsity;

  int dim() const { return static_cast<int>(x0.size()); }
  Matrix lifted() const { return x0 * x0.transpose(); }
};

/// Random unit signal: Gaussian entries on a uniformly random support of
/// size k (all of [n] when k is empty), normalized.
Signal make_signal(int n, std::optional<int> k, std::uint64_t seed);
/// Standard basis vector e_index.
Signal basis_signal(int n, int index);
/// Wraps an explicit vector; throws DomainError unless ||x0||_2 = 1 within 1e-12.
Signal signal_from(const Vector& x0, std::optional<int> sparsity = std::nullopt);

/// One problem instance. Rows [0, offset_count) are reserved for estimating
/// mu0 in the mean-offset program; 0 means "use the program's default split".
struct Ensemble {
  DesignMatrix design;
  Vector y;
  std::string link_id;
  std::uint64_t seed = 0;
  Signal signal;
  int offset_count = 0;

  int rows() const { return static_cast<int>(design.rows()); }
  int dim() const { return static_cast<int>(design.cols()); }
};

/// m x n iid N(0, 1) entries, drawn row by row from Rng(seed).
DesignMatrix sample_design(int m, int n, std::uint64_t seed);

/// y_i = f(a_i^T x0). Conditional links draw measurement i from
/// Rng(derive_seed(seed, i)), so prefixes are stable as m grows.
Vector generate_observations(const DesignMatrix& design, const Signal& signal,
                             const LinkFunction& link, std::uint64_t seed);

/// Design from derive_seed(seed, 0), observations from derive_seed(seed, 1).
Ensemble simulate_ensemble(const LinkFunction& link, const Signal& signal, int m,
                           std::uint64_t seed, int offset_count = 0);

/// A(X)_i = a_i^T X a_i - tr X. Throws AsymmetricInput, DimensionError.
Vector apply_lifted_operator(const DesignMatrix& design, const Matrix& X);
/// A*(r) = sum_i r_i (a_i a_i^T - I). Throws DimensionError.
Matrix adjoint_lifted_operator(const DesignMatrix& design, const Vector& r);

/// B(X)_i = a_i^T X a_i, the uncentered operator of the PhaseLift loss.
Vector apply_phaselift_operator(const DesignMatrix& design, const Matrix& X);
/// B*(r) = sum_i r_i a_i a_i^T.
Matrix adjoint_phaselift_operator(const DesignMatrix& design, const Vector& r);

struct McEstimate {
  double estimate = 0;
  double std_error = 0;
};

/// Monte Carlo estimate of E[L(mu_q X0) - L(X)] for the centered loss
/// L(X) = ||y - A(X)||^2, over `trials` (at least 100) fresh (design, y) draws of size m.
McEstimate expected_excess_loss_mc(const Signal& signal, const LinkFunction& link,
                                   const ModelMoments& moments, const Matrix& X, int m,
                                   int trials, std::uint64_t seed);

}  // namespace lifted
