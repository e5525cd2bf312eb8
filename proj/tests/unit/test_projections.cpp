#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lifted/error.hpp"
#include "lifted/linalg.hpp"
#include "lifted/projections.hpp"
#include "oracles.hpp"

using namespace lifted;

namespace {

Matrix diag2(double a, double b) { return oracle::sym2(a, 0, b); }

double min_eig(const Matrix& X) { return oracle::jacobi_eigen(X).values(0); }

bool psd2(const Matrix& X) { return X(0, 0) >= 0 && X(1, 1) >= 0 && X(0, 0) * X(1, 1) - X(0, 1) * X(0, 1) >= 0; }

bool member(const ConstraintSet& set, const Matrix& X, double tol) {
  switch (set.kind) {
    case ConstraintKind::psd: return min_eig(X) >= -tol;
    case ConstraintKind::psd_trace_cap: return min_eig(X) >= -tol && X.trace() <= set.bound + tol;
    case ConstraintKind::l1_ball: return entrywise_l1(X) <= set.bound + tol;
    case ConstraintKind::halfspace_trace: return X.trace() <= set.bound + tol;
  }
  return false;
}

std::vector<ConstraintSet> all_sets() {
  return {ConstraintSet::psd(), ConstraintSet::psd_trace_cap(1.5), ConstraintSet::l1_ball(2.0),
          ConstraintSet::halfspace_trace(-0.5)};
}

}  // namespace

TEST(ProjectPsd, HandExamples) {
  EXPECT_TRUE(project_psd(diag2(1, -2)).isApprox(diag2(1, 0)));
  const Matrix P = oracle::sym2(2, 1, 1);
  EXPECT_LT((project_psd(P) - P).norm(), 1e-14);
  EXPECT_LT((project_psd(oracle::sym2(0, 1, 0)) - oracle::sym2(0.5, 0.5, 0.5)).norm(), 1e-14);
}

TEST(ProjectTraceCap, HandExamples) {
  EXPECT_LT((project_trace_capped_psd(diag2(2, 1), 1) - diag2(1, 0)).norm(), 1e-14);
  EXPECT_LT((project_trace_capped_psd(diag2(0.2, 0.1), 1) - diag2(0.2, 0.1)).norm(), 1e-14);
  EXPECT_LT((project_trace_capped_psd(diag2(1, -1), 3) - diag2(1, 0)).norm(), 1e-14);
  EXPECT_THROW(project_trace_capped_psd(diag2(1, 1), -1), DomainError);
}

TEST(ProjectL1, HandExamples) {
  EXPECT_LT((project_l1_ball(oracle::sym2(3, 1, 0), 2) - diag2(2, 0)).norm(), 1e-14);
  const Matrix M = oracle::sym2(0.3, -0.2, 0.1);
  EXPECT_EQ(project_l1_ball(M, 1.0), M);
  EXPECT_EQ(project_l1_ball(M, 0.0), Matrix::Zero(2, 2));
}

TEST(WaterFilling, ThresholdSolvesTheEquation) {
  oracle::Normal g(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(1 + t % 9);
    double sum = 0;
    for (double& x : v) sum += (x = std::fabs(g()));
    const double target = 0.5 * sum * g.uniform();
    const double theta = water_filling_threshold(v, target);
    double got = 0;
    for (double x : v) got += std::max(x - theta, 0.0);
    EXPECT_NEAR(got, target, 1e-12);
  }
  // Ties resolve to the same threshold regardless of order.
  EXPECT_DOUBLE_EQ(water_filling_threshold(std::vector<double>{1, 1, 1}, 1.5), 0.5);
}

TEST(CappedSimplex, HandThreshold) {
  // (1.3 - t) + (0.4 - t) = 1 at t = 0.35.
  const Vector p = project_capped_simplex((Vector(2) << 1.3, 0.4).finished(), 1.0);
  EXPECT_NEAR(p(0), 0.95, 1e-14);
  EXPECT_NEAR(p(1), 0.05, 1e-14);
  const Vector q = project_capped_simplex((Vector(3) << 2.0, -1.0, 0.5).finished(), 1.0);
  EXPECT_NEAR(q(0), 1.0, 1e-14);
  EXPECT_EQ(q(1), 0.0);
  EXPECT_EQ(q(2), 0.0);
}

TEST(Projections, IdempotentFeasibleNonexpansive) {
  oracle::Normal g(2024);
  for (const auto& set : all_sets()) {
    for (int t = 0; t < 100; ++t) {
      const int n = 1 + t % 8;
      const Matrix S1 = oracle::random_symmetric(n, g, 1.5);
      const Matrix S2 = oracle::random_symmetric(n, g, 1.5);
      const Matrix P1 = set.project(S1), P2 = set.project(S2);
      EXPECT_LT((set.project(P1) - P1).norm(), 1e-10) << static_cast<int>(set.kind) << " " << t;
      EXPECT_TRUE(member(set, P1, 1e-8)) << static_cast<int>(set.kind) << " " << t;
      EXPECT_LE((P1 - P2).norm(), (S1 - S2).norm() + 1e-12);
      EXPECT_LT(asymmetry(P1), 1e-12);
    }
  }
}

TEST(Projections, VariationalInequalityCertificate) {
  // <S - P(S), Y - P(S)> <= 0 for every Y in the set.
  oracle::Normal g(7);
  for (const auto& set : all_sets()) {
    for (int t = 0; t < 30; ++t) {
      const int n = 2 + t % 5;
      const Matrix S = oracle::random_symmetric(n, g, 2.0);
      const Matrix P = set.project(S);
      for (int s = 0; s < 10; ++s) {
        const Matrix Y = set.project(oracle::random_symmetric(n, g, 2.0));
        EXPECT_LE(((S - P).array() * (Y - P).array()).sum(), 1e-9);
      }
    }
  }
}

TEST(Projections, TwoByTwoGridOptimality) {
  oracle::Normal g(31);
  for (int t = 0; t < 6; ++t) {
    const Matrix S = oracle::random_symmetric(2, g, 1.5);
    auto cost = [&](const Matrix& X) { return (X - S).squaredNorm(); };
    EXPECT_LT((ConstraintSet::psd().project(S) - oracle::grid_minimize_psd2(cost)).norm(), 1e-4) << t;
    EXPECT_LT((ConstraintSet::psd_trace_cap(1.0).project(S) - oracle::grid_minimize_psd2(cost, 1.0)).norm(), 1e-4)
        << t;
    const Matrix l1 = oracle::grid_minimize_2x2(cost, [](const Matrix& X) { return entrywise_l1(X) <= 1.0; },
                                                Matrix::Zero(2, 2), 4.0);
    EXPECT_LT((ConstraintSet::l1_ball(1.0).project(S) - l1).norm(), 1e-4) << t;
  }
}

TEST(Dykstra, SingleSetMatchesDirectProjection) {
  const ConstraintSet sets[] = {ConstraintSet::psd_trace_cap(1)};
  const auto r = dykstra_intersection(diag2(2, -1), sets);
  EXPECT_LT((r.X - diag2(1, 0)).norm(), 1e-14);
}

TEST(Dykstra, FeasibleInputIsFixed) {
  const ConstraintSet sets[] = {ConstraintSet::l1_ball(2), ConstraintSet::psd_trace_cap(1)};
  const Matrix X = oracle::sym2(0.5, 0.1, 0.3);
  const auto r = dykstra_intersection(X, sets);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.X - X).norm(), 1e-9);
}

TEST(Dykstra, PsdL1MatchesGridOracle) {
  const Matrix S = oracle::sym2(3, 1, 0);
  const ConstraintSet sets[] = {ConstraintSet::l1_ball(2), ConstraintSet::psd()};
  const auto r = dykstra_intersection(S, sets, {1e-12, true, 5000, true});
  const Matrix grid = oracle::grid_minimize_2x2(
      [&](const Matrix& X) { return (X - S).squaredNorm(); },
      [](const Matrix& X) { return psd2(X) && entrywise_l1(X) <= 2.0; }, Matrix::Zero(2, 2), 3.0, 18);
  EXPECT_LT((r.X - grid).norm(), 1e-6);
}

TEST(Dykstra, RandomIntersectionsSatisfyAllSets) {
  oracle::Normal g(5);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 6;
    const Matrix S = oracle::random_symmetric(n, g, 1.0);
    const ConstraintSet sets[] = {ConstraintSet::l1_ball(1.5), ConstraintSet::psd_trace_cap(1.0)};
    const auto r = dykstra_intersection(S, sets, {1e-10, true, 20000, true});
    EXPECT_TRUE(member(sets[0], r.X, 1e-8));
    EXPECT_TRUE(member(sets[1], r.X, 1e-8));
  }
}

TEST(Dykstra, WarmStartReachesSamePoint) {
  oracle::Normal g(6);
  const Matrix S = oracle::random_symmetric(5, g, 1.0);
  const ConstraintSet sets[] = {ConstraintSet::l1_ball(1.2), ConstraintSet::psd_trace_cap(1.0)};
  const DykstraOptions opts{1e-11, true, 50000, true};
  const auto cold = dykstra_intersection(S, sets, opts);
  DykstraState state;
  dykstra_intersection(S + 0.05 * oracle::random_symmetric(5, g), sets, opts, &state);
  const auto warm = dykstra_intersection(S, sets, opts, &state);
  EXPECT_LT((warm.X - cold.X).norm(), 1e-8);
}

TEST(Dykstra, ReportsNoConvergence) {
  oracle::Normal g(9);
  const Matrix S = oracle::random_symmetric(6, g, 1.0);
  const ConstraintSet sets[] = {ConstraintSet::l1_ball(3.0), ConstraintSet::psd_trace_cap(2.0)};
  EXPECT_THROW(dykstra_intersection(S, sets, {1e-14, true, 2, true}), NoConvergence);
  const auto r = dykstra_intersection(S, sets, {1e-14, true, 2, false});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.cycles, 2);
  EXPECT_THROW(dykstra_intersection(S, sets, {0.0, true, 2, true}), DomainError);
}
