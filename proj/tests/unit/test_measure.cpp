#include <gtest/gtest.h>

#include <cmath>

#include "lifted/error.hpp"
#include "lifted/measure.hpp"
#include "oracles.hpp"

using namespace lifted;

namespace {

DesignMatrix row(std::initializer_list<double> values) {
  DesignMatrix A(1, static_cast<Eigen::Index>(values.size()));
  int j = 0;
  for (double v : values) A(0, j++) = v;
  return A;
}

}  // namespace

TEST(Signal, MakeSignalHasUnitNormAndSupport) {
  const auto s = make_signal(30, 4, 8);
  EXPECT_NEAR(s.x0.norm(), 1.0, 1e-12);
  EXPECT_EQ((s.x0.array() != 0.0).count(), 4);
  const auto d = make_signal(30, std::nullopt, 8);
  EXPECT_EQ((d.x0.array() != 0.0).count(), 30);
  EXPECT_THROW(make_signal(5, 6, 1), DomainError);
  EXPECT_THROW(signal_from(Vector::Ones(3)), DomainError);
}

TEST(Design, Deterministic) {
  EXPECT_EQ(sample_design(3, 2, 99), sample_design(3, 2, 99));
  EXPECT_NE(sample_design(3, 2, 99), sample_design(3, 2, 100));
}

TEST(Design, MomentsWithinCltBounds) {
  const DesignMatrix A = sample_design(10000, 1, 2024);
  const double mean = A.mean();
  const double var = (A.array() - mean).square().sum() / (A.size() - 1);
  EXPECT_GE(mean, -0.05);
  EXPECT_LE(mean, 0.05);
  EXPECT_GE(var, 0.95);
  EXPECT_LE(var, 1.05);
}

TEST(Design, EmptyDimensionsThrow) {
  EXPECT_THROW(sample_design(0, 5, 1), DimensionError);
  EXPECT_THROW(sample_design(5, 0, 1), DimensionError);
}

TEST(Observations, HandExamples) {
  const auto e1 = basis_signal(2, 0);
  EXPECT_DOUBLE_EQ(generate_observations(row({2, 0}), e1, make_link("quadratic"), 0)(0), 4.0);
  EXPECT_DOUBLE_EQ(generate_observations(row({2, 0}), e1, make_link("f1"), 0)(0), 2.5);
  EXPECT_THROW(generate_observations(row({2, 0, 1}), e1, make_link("quadratic"), 0), DimensionError);
}

TEST(Observations, ConditionalDeterministicAndPrefixStable) {
  const auto link = make_link("poisson");
  const auto s = make_signal(5, std::nullopt, 3);
  const DesignMatrix A = sample_design(40, 5, 4);
  const Vector y1 = generate_observations(A, s, link, 17);
  const Vector y2 = generate_observations(A, s, link, 17);
  EXPECT_EQ(y1, y2);
  const DesignMatrix head = A.topRows(10);
  EXPECT_EQ(generate_observations(head, s, link, 17), y1.head(10));
}

TEST(Ensemble, RegenerationIsBitIdentical) {
  const auto link = make_link("f2");
  const auto s = make_signal(6, 2, 1);
  const auto a = simulate_ensemble(link, s, 30, 5);
  const auto b = simulate_ensemble(link, s, 30, 5);
  EXPECT_EQ(a.design, b.design);
  EXPECT_EQ(a.y, b.y);
  EXPECT_THROW(simulate_ensemble(link, s, 30, 5, 30), DomainError);
  EXPECT_THROW(simulate_ensemble(link, s, 30, 5, -1), DomainError);
}

TEST(Operator, HandExamples) {
  Matrix X = Matrix::Zero(2, 2);
  X(0, 0) = 1;
  EXPECT_DOUBLE_EQ(apply_lifted_operator(row({2, 0}), X)(0), 3.0);

  const DesignMatrix A = sample_design(7, 4, 3);
  const Vector s = A.rowwise().squaredNorm();
  const Vector got = apply_lifted_operator(A, Matrix::Identity(4, 4));
  EXPECT_LT((got - (s.array() - 4.0).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(apply_lifted_operator(A, Matrix::Zero(4, 4)), Vector::Zero(7));

  Matrix bad = Matrix::Zero(4, 4);
  bad(0, 1) = 1;
  EXPECT_THROW(apply_lifted_operator(A, bad), AsymmetricInput);
  EXPECT_THROW(apply_lifted_operator(A, Matrix::Zero(3, 3)), DimensionError);
}

TEST(Operator, AdjointHandExamples) {
  EXPECT_EQ(adjoint_lifted_operator(sample_design(5, 3, 1), Vector::Zero(5)), Matrix::Zero(3, 3));
  const Matrix got = adjoint_lifted_operator(row({2, 0}), Vector::Ones(1));
  EXPECT_TRUE(got.isApprox(oracle::sym2(3, 0, -1)));
  EXPECT_THROW(adjoint_lifted_operator(row({2, 0}), Vector::Ones(2)), DimensionError);
}

TEST(Operator, MatchesMaterializedOracle) {
  const DesignMatrix A = sample_design(9, 3, 12);
  oracle::Normal g(5);
  const Matrix X = oracle::random_symmetric(3, g);
  for (bool centered : {true, false}) {
    const Matrix M = oracle::materialize_operator(A, centered);
    const Vector vecX = Eigen::Map<const Vector>(X.data(), X.size());
    const Vector want = M * vecX;
    const Vector got = centered ? apply_lifted_operator(A, X) : apply_phaselift_operator(A, X);
    EXPECT_LT((want - got).norm(), 1e-10 * want.norm());
  }
}

TEST(Operator, AdjointIdentityRandomPairs) {
  oracle::Normal g(44);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 8;
    const int m = 1 + (t * 7) % 13;
    const DesignMatrix A = sample_design(m, n, static_cast<std::uint64_t>(t));
    const Matrix X = oracle::random_symmetric(n, g);
    Vector r(m);
    for (int i = 0; i < m; ++i) r(i) = g();
    for (bool centered : {true, false}) {
      const double lhs = (centered ? apply_lifted_operator(A, X) : apply_phaselift_operator(A, X)).dot(r);
      const Matrix adj = centered ? adjoint_lifted_operator(A, r) : adjoint_phaselift_operator(A, r);
      const double rhs = (X.array() * adj.array()).sum();
      EXPECT_LE(std::fabs(lhs - rhs), 1e-9 * std::max(1.0, std::fabs(lhs))) << t;
    }
  }
}

TEST(Operator, AdjointIsSymmetric) {
  const DesignMatrix A = sample_design(11, 5, 2);
  Vector r = Vector::LinSpaced(11, -1, 1);
  const Matrix adj = adjoint_lifted_operator(A, r);
  EXPECT_EQ(adj, adj.transpose());
}

TEST(Operator, VarianceIdentity) {
  oracle::Normal g(8);
  const int n = 6, m = 20, draws = 4000;
  const Matrix V = oracle::random_symmetric(n, g);
  std::vector<double> v;
  for (int t = 0; t < draws; ++t) {
    const DesignMatrix A = sample_design(m, n, derive_seed(31, static_cast<std::uint64_t>(t)));
    v.push_back(apply_lifted_operator(A, V).squaredNorm() / (2.0 * m));
  }
  const auto ms = oracle::mean_se(v);
  EXPECT_NEAR(ms.mean, V.squaredNorm(), 3 * ms.se);
}

TEST(Operator, LiftingIdentity) {
  oracle::Normal g(3);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 9;
    Vector x(n), a(n);
    for (int i = 0; i < n; ++i) {
      x(i) = g();
      a(i) = g();
    }
    x.normalize();
    const double mu = 0.3 + g.uniform();
    const double lhs = mu * (std::pow(a.dot(x), 2) - 1.0);
    const Matrix G = a * a.transpose() - Matrix::Identity(n, n);
    const double rhs = (G.array() * (mu * x * x.transpose()).array()).sum();
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::fabs(lhs)));
  }
}

TEST(ExcessLoss, IdentityCaseIsZero) {
  const auto link = make_link("quadratic");
  const auto m = compute_moments(link);
  const auto s = make_signal(8, std::nullopt, 2);
  const auto est = expected_excess_loss_mc(s, link, m, m.mu_q * s.lifted(), 50, 200, 3);
  EXPECT_NEAR(est.estimate, 0.0, 3 * est.std_error + 1e-12);
}

TEST(ExcessLoss, MatchesDerivedQuadraticFormula) {
  // For the noiseless quadratic link z = y - A(mu X0) is identically 1 and
  // E<z, A(D)> = 0, so the expected excess loss is -E||A(D)||^2 = -2m||D||^2.
  const auto link = make_link("quadratic");
  const auto mom = compute_moments(link);
  const auto s = make_signal(8, std::nullopt, 6);
  Matrix D = Matrix::Zero(8, 8);
  D(0, 1) = D(1, 0) = 0.1;
  const int m = 50;
  const auto est = expected_excess_loss_mc(s, link, mom, mom.mu_q * s.lifted() + D, m, 2000, 9);
  EXPECT_NEAR(est.estimate, -2.0 * m * D.squaredNorm(), 3 * est.std_error);
  EXPECT_THROW(expected_excess_loss_mc(s, link, mom, D, m, 99, 9), DomainError);
}
