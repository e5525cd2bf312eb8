#include <gtest/gtest.h>

#include <Eigen/QR>
#include <cmath>

#include "lifted/error.hpp"
#include "lifted/rounding.hpp"
#include "lifted/solver.hpp"
#include "oracles.hpp"

using namespace lifted;

namespace {

Matrix random_orthogonal(int n, oracle::Normal& g) {
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = g();
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ();
}

}  // namespace

TEST(SpectralRound, HandExamples) {
  Matrix X = Matrix::Zero(3, 3);
  X(0, 0) = 4;
  auto r = spectral_round(X);
  EXPECT_NEAR(r.lambda1, 4.0, 1e-14);
  EXPECT_LT((r.x_hat - 2.0 * Vector::Unit(3, 0)).norm(), 1e-14);
  r = spectral_round(oracle::sym2(4, 0, 1));
  EXPECT_LT((r.x_hat - 2.0 * Vector::Unit(2, 0)).norm(), 1e-14);
  EXPECT_FALSE(r.zero);
}

TEST(SpectralRound, ZeroAndIndefiniteInputs) {
  const auto r = spectral_round(Matrix::Zero(3, 3));
  EXPECT_TRUE(r.zero);
  EXPECT_EQ(r.x_hat, Vector::Zero(3));
  EXPECT_THROW(spectral_round(oracle::sym2(1, 0, -0.1)), DomainError);
  EXPECT_THROW(spectral_round(Matrix::Zero(2, 3)), DimensionError);
}

TEST(SpectralRound, MatchesPowerMethodOracle) {
  oracle::Normal g(21);
  for (int t = 0; t < 10; ++t) {
    Vector u(6);
    for (int i = 0; i < 6; ++i) u(i) = g();
    u.normalize();
    Matrix E = oracle::random_symmetric(6, g);
    E /= E.norm();
    Matrix X = u * u.transpose() + 1e-3 * E;
    X = 0.5 * (X + X.transpose());
    // A tiny perturbation can dip below zero; shift to keep the input PSD.
    X += 2e-3 * Matrix::Identity(6, 6);
    const auto r = spectral_round(X);
    const Vector v = oracle::power_top_eigenvector(X, 5, 200000, 3 + t);
    const double cosine = std::fabs(r.x_hat.normalized().dot(v));
    EXPECT_LT(std::acos(std::min(1.0, cosine)), 1e-6);
    EXPECT_NEAR(r.lambda1, v.dot(X * v), 1e-10);
  }
}

TEST(SpectralRound, SignRuleIsDeterministic) {
  Vector u(3);
  u << 0.2, -0.9, 0.3;
  u.normalize();
  const auto r = spectral_round(u * u.transpose());
  EXPECT_GT(r.x_hat(1), 0.0);
}

TEST(Metrics, HandExamples) {
  const auto s = make_signal(5, std::nullopt, 3);
  const double mu = 0.7;
  auto m = recovery_metrics(mu * s.lifted(), s, mu);
  EXPECT_NEAR(m.frob_error, 0.0, 1e-14);
  EXPECT_NEAR(m.correlation, 1.0, 1e-12);
  ASSERT_TRUE(m.vec_error);
  EXPECT_NEAR(*m.vec_error, 0.0, 1e-7);

  const Vector xhat = -std::sqrt(mu) * s.x0;
  m = direction_metrics(xhat, s, mu);
  EXPECT_NEAR(*m.vec_error, 0.0, 1e-7);
  EXPECT_NEAR(m.correlation, 1.0, 1e-12);

  // E orthogonal to X0 with unit Frobenius norm.
  const auto e = basis_signal(3, 0);
  Matrix E = Matrix::Zero(3, 3);
  E(1, 2) = E(2, 1) = 1.0 / std::sqrt(2.0);
  m = recovery_metrics(mu * e.lifted() + 0.01 * E, e, mu);
  EXPECT_NEAR(m.frob_error, 0.01, 1e-14);
  EXPECT_THROW(recovery_metrics(Matrix::Zero(4, 4), e, mu), DimensionError);
}

TEST(Metrics, NonpositiveMuHasNoVectorError) {
  const auto s = basis_signal(3, 1);
  EXPECT_FALSE(recovery_metrics(-s.lifted(), s, -1.0).vec_error);
  EXPECT_NEAR(recovery_metrics(-s.lifted(), s, -1.0).correlation, 1.0, 1e-12);
  EXPECT_EQ(recovery_metrics(Matrix::Zero(3, 3), s, 1.0).correlation, 0.0);
}

TEST(Metrics, SignInvariance) {
  oracle::Normal g(4);
  const auto s = make_signal(7, 3, 1);
  for (int t = 0; t < 20; ++t) {
    Vector x(7);
    for (int i = 0; i < 7; ++i) x(i) = g();
    const auto a = direction_metrics(x, s, 0.8), b = direction_metrics(-x, s, 0.8);
    EXPECT_DOUBLE_EQ(a.frob_error, b.frob_error);
    EXPECT_DOUBLE_EQ(a.correlation, b.correlation);
    EXPECT_DOUBLE_EQ(*a.vec_error, *b.vec_error);
  }
}

TEST(Metrics, RotationCovariance) {
  oracle::Normal g(5);
  const int n = 6;
  const auto s = make_signal(n, std::nullopt, 9);
  for (int t = 0; t < 10; ++t) {
    const Matrix Q = random_orthogonal(n, g);
    Matrix X = oracle::random_symmetric(n, g, 0.1) + s.lifted();
    X = X * X.transpose();
    const auto a = recovery_metrics(X, s, 0.9);
    const auto b = recovery_metrics(Q * X * Q.transpose(), signal_from((Q * s.x0).normalized()), 0.9);
    EXPECT_NEAR(a.frob_error, b.frob_error, 1e-9);
    EXPECT_NEAR(a.correlation, b.correlation, 1e-9);
    EXPECT_NEAR(*a.vec_error, *b.vec_error, 1e-9);
    EXPECT_NEAR(a.lambda1, b.lambda1, 1e-9);
  }
}

TEST(Metrics, RotationCovarianceEndToEnd) {
  // Rotating x0 and every design row leaves the observations unchanged and
  // rotates the program; the solved metrics agree to solver accuracy.
  oracle::Normal g(6);
  const int n = 5;
  const auto link = make_link("abs");
  const auto s = make_signal(n, std::nullopt, 2);
  const auto e = simulate_ensemble(link, s, 150, 4);
  const Matrix Q = random_orthogonal(n, g);
  Ensemble r = e;
  r.design = e.design * Q.transpose();
  r.signal = signal_from((Q * s.x0).normalized());
  const double mu = compute_moments(link).mu_q;
  ProgramSpec spec;
  spec.mu_tilde = mu;
  SolverOptions o;
  o.rel_tol = 1e-15;
  o.max_iter = 100000;
  const auto a = recovery_metrics(solve_lifted(spec, e, o).X_hat, s, mu);
  const auto b = recovery_metrics(solve_lifted(spec, r, o).X_hat, r.signal, mu);
  EXPECT_NEAR(a.frob_error, b.frob_error, 1e-6);
  EXPECT_NEAR(a.correlation, b.correlation, 1e-6);
}

TEST(Metrics, DavisKahanConsequence) {
  oracle::Normal g(2);
  const double bound = 2.0 * std::sqrt(2.0);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 9;
    const auto s = make_signal(n, std::nullopt, static_cast<std::uint64_t>(t));
    const double mu = 0.2 + 2.0 * g.uniform();
    const double eps = std::pow(10.0, -3.0 + 2.5 * g.uniform()) * mu;
    Matrix E = oracle::random_symmetric(n, g);
    Matrix X = mu * s.lifted() + eps * E / E.norm();
    X = 0.5 * (X + X.transpose());
    const auto eig = oracle::jacobi_eigen(X);
    X = eig.vectors * eig.values.cwiseMax(0.0).asDiagonal() * eig.vectors.transpose();
    X = 0.5 * (X + X.transpose());
    const auto m = recovery_metrics(X, s, mu);
    EXPECT_LE(*m.vec_error, bound * std::min(std::sqrt(mu), m.frob_error / std::sqrt(mu)) + 1e-12) << t;
    EXPECT_GE(m.correlation, 0.0);
    EXPECT_LE(m.correlation, 1.0);
  }
}
