#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "lifted/error.hpp"
#include "lifted/model.hpp"
#include "oracles.hpp"

using namespace lifted;

namespace {

// Independent Monte Carlo of the moments with a standard-library sampler.
oracle::MomentSample mc_oracle(const std::function<double(double, oracle::Normal&)>& y, int samples,
                               std::uint64_t seed) {
  oracle::Normal g(seed);
  std::vector<double> gs(samples), ys(samples);
  for (int i = 0; i < samples; ++i) {
    gs[i] = g();
    ys[i] = y(gs[i], g);
  }
  return oracle::mc_moments(gs, ys);
}

double quad_second_moment(const LinkFunction& link) {
  // E f^2 by the same trapezoid rule, written out independently.
  const int nodes = 20001;
  const double r = 8.0, h = 2 * r / (nodes - 1);
  double s = 0;
  for (int i = 0; i < nodes; ++i) {
    const double x = -r + h * i;
    const double w = (i == 0 || i == nodes - 1 ? 0.5 : 1.0) * h * std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi);
    const double f = link.eval(x);
    s += w * f * f;
  }
  return s;
}

}  // namespace

TEST(Links, QuantizersTakeFourAndNineValues) {
  const auto f1 = make_link("f1"), f2 = make_link("f2");
  std::set<double> v1, v2;
  for (int i = 0; i <= 200000; ++i) {
    const double u = -10.0 + 20.0 * i / 200000;
    v1.insert(f1.eval(u));
    v2.insert(f2.eval(u));
  }
  EXPECT_EQ(v1.size(), 4u);
  EXPECT_EQ(v2.size(), 9u);
}

TEST(Links, DeterministicAndConditionalPurity) {
  const auto q = make_link("quadratic");
  Rng r1(1), r2(2);
  EXPECT_EQ(q(1.7, r1), q(1.7, r2));
  const auto p = make_link("poisson");
  Rng a(5), b(5);
  EXPECT_EQ(p(1.3, a), p(1.3, b));
  EXPECT_THROW(make_link("nope"), ConfigError);
}

TEST(Moments, QuadraticClosedForm) {
  const auto m = compute_moments(make_link("quadratic"));
  EXPECT_NEAR(m.mu0, 1.0, 1e-8);
  EXPECT_NEAR(m.mu_ell, 0.0, 1e-8);
  EXPECT_NEAR(m.mu_q, 1.0, 1e-8);
  EXPECT_NEAR(m.tau_q, 1.0, 1e-8);
  EXPECT_NEAR(m.rho_q, 1.0, 1e-8);
  EXPECT_NEAR(m.eta_q, std::sqrt(2.0), 1e-8);
  EXPECT_EQ(m.method, MomentMethod::quadrature);
  EXPECT_EQ(m.std_error.tau_q, 0.0);
}

TEST(Moments, LinearLinkIsOdd) {
  const auto m = compute_moments(make_link("linear"));
  EXPECT_NEAR(m.mu_ell, 1.0, 1e-8);
  EXPECT_NEAR(m.mu_q, 0.0, 1e-12);
  EXPECT_NEAR(m.tau_ell, 0.0, 1e-6);
  EXPECT_THROW(effective_noise_ratio(m), DegenerateLink);
}

TEST(Moments, EvenLinksHaveNoLinearTerm) {
  for (const char* id : {"quadratic", "abs", "f1", "f2", "constant"}) {
    EXPECT_NEAR(compute_moments(make_link(id)).mu_ell, 0.0, 1e-10) << id;
  }
}

TEST(Moments, PoissonViaConditionalMoments) {
  const auto m = compute_moments(make_link("poisson"));
  EXPECT_NEAR(m.mu_q, 1.0, 1e-8);
  EXPECT_NEAR(m.tau_q, std::sqrt(2.0), 1e-8);
  const auto mc = mc_oracle([](double g, oracle::Normal& n) {
    std::poisson_distribution<int> d(g * g);
    return g == 0 ? 0.0 : static_cast<double>(d(n.engine()));
  }, 1000000, 77);
  EXPECT_NEAR(m.mu_q, mc.mu_q.mean, 3 * mc.mu_q.se);
  EXPECT_NEAR(m.tau_q, mc.tau_q.mean, 3 * mc.tau_q.se);
}

TEST(Moments, ConditionalWithoutMomentsNeedsMonteCarlo) {
  const auto link = conditional_link("noisy", [](double g, Rng& r) { return g * g + r.normal(); });
  EXPECT_THROW(compute_moments(link), MissingConditionalMoments);
  const auto m = compute_moments(link, MonteCarloRule{200000, 3});
  EXPECT_EQ(m.method, MomentMethod::monte_carlo);
  EXPECT_NEAR(m.mu_q, 1.0, 4 * m.std_error.mu_q);
  // tau_q^2 = 1 (offset) + 1 (noise)
  EXPECT_NEAR(m.tau_q, std::sqrt(2.0), 4 * m.std_error.tau_q);
}

TEST(Moments, RejectsBadRules) {
  const auto q = make_link("quadratic");
  EXPECT_THROW(compute_moments(q, QuadratureRule{100, 8.0}), ConfigError);
  EXPECT_THROW(compute_moments(q, QuadratureRule{2001, 7.5}), ConfigError);
  EXPECT_THROW(compute_moments(q, MonteCarloRule{99999, 0}), ConfigError);
}

TEST(Moments, NonFiniteIntegrandIsReported) {
  const auto bad = deterministic_link("bad", [](double u) { return u > 7.0 ? NAN : u; });
  EXPECT_THROW(compute_moments(bad), NonFiniteMoment);
}

TEST(Moments, QuadratureAgreesWithIndependentMonteCarlo) {
  for (const char* id : {"quadratic", "abs", "f1", "f2", "constant"}) {
    const auto link = make_link(id);
    const auto q = compute_moments(link);
    const auto mc = mc_oracle([&](double g, oracle::Normal&) { return link.eval(g); }, 1000000, 123);
    EXPECT_NEAR(q.mu0, mc.mu0.mean, 3 * mc.mu0.se + 1e-12) << id;
    EXPECT_NEAR(q.mu_q, mc.mu_q.mean, 3 * mc.mu_q.se + 1e-12) << id;
    EXPECT_NEAR(q.tau_q, mc.tau_q.mean, 3 * mc.tau_q.se + 1e-12) << id;
    EXPECT_NEAR(q.rho_q, mc.rho_q.mean, 3 * mc.rho_q.se + 1e-12) << id;
    EXPECT_NEAR(q.eta_q, mc.eta_q.mean, 3 * mc.eta_q.se + 1e-12) << id;
  }
}

TEST(Moments, LibraryMonteCarloAgreesWithQuadrature) {
  const auto link = make_link("f2");
  const auto q = compute_moments(link);
  const auto mc = compute_moments(link, MonteCarloRule{1000000, 9});
  EXPECT_NEAR(mc.mu0, q.mu0, 3 * mc.std_error.mu0);
  EXPECT_NEAR(mc.mu_q, q.mu_q, 3 * mc.std_error.mu_q);
  EXPECT_NEAR(mc.tau_q, q.tau_q, 3 * mc.std_error.tau_q);
  EXPECT_NEAR(mc.rho_q, q.rho_q, 3 * mc.std_error.rho_q);
  EXPECT_NEAR(mc.eta_q, q.eta_q, 3 * mc.std_error.eta_q);
}

TEST(Moments, TauIdentityForDeterministicLinks) {
  for (const auto& id : builtin_link_ids()) {
    const auto link = make_link(id);
    if (link.kind != LinkKind::deterministic) continue;
    const auto m = compute_moments(link);
    EXPECT_NEAR(m.tau_q * m.tau_q + 2 * m.mu_q * m.mu_q, quad_second_moment(link), 1e-6) << id;
  }
}

TEST(Hermite, CoefficientsMatchMoments) {
  const auto q = make_link("quadratic");
  EXPECT_NEAR(hermite_coeff(q, 2), 1.0, 1e-8);
  EXPECT_NEAR(hermite_coeff(q, 1), 0.0, 1e-12);
  EXPECT_NEAR(hermite_coeff(make_link("constant"), 0), 1.0, 1e-12);
  for (const char* id : {"abs", "f1", "f2", "linear"}) {
    const auto link = make_link(id);
    const auto m = compute_moments(link);
    EXPECT_NEAR(hermite_coeff(link, 1), m.mu_ell, 1e-8) << id;
    EXPECT_NEAR(hermite_coeff(link, 2), m.mu_q, 1e-8) << id;
    EXPECT_NEAR(hermite_coeff(link, 0), m.mu0, 1e-8) << id;
  }
}

TEST(Hermite, MonteCarloOrderTwo) {
  EXPECT_NEAR(hermite_coeff(make_link("quadratic"), 2, MonteCarloRule{400000, 4}), 1.0, 0.02);
}

TEST(NoiseRatio, QuadraticIsOne) {
  const auto m = compute_moments(make_link("quadratic"));
  EXPECT_NEAR(effective_noise_ratio(m), 1.0, 1e-8);
  EXPECT_NEAR(variance_to_mu_ratio(m), 1.0, 1e-8);
}
