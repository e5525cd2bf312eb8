#include "lifted/model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "lifted/error.hpp"

namespace lifted {

double LinkFunction::operator()(double gamma, Rng& rng) const {
  if (kind == LinkKind::deterministic) return eval(gamma);
  return sample(gamma, rng);
}

LinkFunction deterministic_link(std::string id, std::function<double(double)> f) {
  LinkFunction link;
  link.id = std::move(id);
  link.kind = LinkKind::deterministic;
  link.eval = std::move(f);
  return link;
}

LinkFunction conditional_link(std::string id, std::function<double(double, Rng&)> sampler,
                              std::function<double(double)> mean,
                              std::function<double(double)> second_moment) {
  LinkFunction link;
  link.id = std::move(id);
  link.kind = LinkKind::conditional;
  link.sample = std::move(sampler);
  link.conditional_mean = std::move(mean);
  link.conditional_second_moment = std::move(second_moment);
  return link;
}

namespace {

double quantizer_f1(double u) {
  const double a = std::fabs(u);
  return a < 3.0 ? std::floor(a) + 0.5 : 3.5;
}

double quantizer_f2(double u) {
  const double s = u * u;
  return s < 4.0 ? (std::floor(2.0 * s) + 0.5) / 2.0 : 4.25;
}

}  // namespace

LinkFunction make_link(std::string_view id) {
  if (id == "linear") return deterministic_link("linear", [](double u) { return u; });
  if (id == "quadratic") return deterministic_link("quadratic", [](double u) { return u * u; });
  if (id == "abs") return deterministic_link("abs", [](double u) { return std::fabs(u); });
  if (id == "constant") return deterministic_link("constant", [](double) { return 1.0; });
  if (id == "f1") return deterministic_link("f1", quantizer_f1);
  if (id == "f2") return deterministic_link("f2", quantizer_f2);
  if (id == "poisson") {
    return conditional_link(
        "poisson", [](double u, Rng& rng) { return static_cast<double>(rng.poisson(u * u)); },
        [](double u) { return u * u; }, [](double u) { return u * u + u * u * u * u; });
  }
  throw ConfigError("unknown link id '" + std::string(id) + "'");
}

std::vector<std::string> builtin_link_ids() {
  return {"linear", "quadratic", "abs", "constant", "f1", "f2", "poisson"};
}

namespace {

void validate_rule(const IntegrationSpec& spec) {
  if (const auto* q = std::get_if<QuadratureRule>(&spec)) {
    if (q->nodes < 101) throw ConfigError("quadrature needs at least 101 nodes");
    if (!(q->radius >= 8.0)) throw ConfigError("quadrature radius must be at least 8");
  } else {
    const auto& mc = std::get<MonteCarloRule>(spec);
    if (mc.samples < 100000) throw ConfigError("Monte Carlo needs at least 1e5 samples");
  }
}

// Trapezoid nodes and weights against the standard normal density.
struct Grid {
  std::vector<double> x, w;
};

Grid trapezoid_grid(const QuadratureRule& rule) {
  Grid g;
  g.x.resize(rule.nodes);
  g.w.resize(rule.nodes);
  const double h = 2.0 * rule.radius / (rule.nodes - 1);
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (int i = 0; i < rule.nodes; ++i) {
    const double x = -rule.radius + h * i;
    const double end = (i == 0 || i == rule.nodes - 1) ? 0.5 : 1.0;
    g.x[i] = x;
    g.w[i] = end * h * c * std::exp(-0.5 * x * x);
  }
  return g;
}

// E[y | gamma] and E[y^2 | gamma] on the grid.
void conditional_values(const LinkFunction& link, const Grid& g, std::vector<double>& m,
                        std::vector<double>& s) {
  m.resize(g.x.size());
  s.resize(g.x.size());
  if (link.kind == LinkKind::deterministic) {
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      m[i] = link.eval(g.x[i]);
      s[i] = m[i] * m[i];
    }
  } else {
    if (!link.has_conditional_moments()) {
      throw MissingConditionalMoments("link '" + link.id +
                                      "' has no conditional moments; use Monte Carlo");
    }
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      m[i] = link.conditional_mean(g.x[i]);
      s[i] = link.conditional_second_moment(g.x[i]);
    }
  }
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    if (!std::isfinite(m[i]) || !std::isfinite(s[i])) {
      throw NonFiniteMoment("link '" + link.id + "' is not finite at gamma = " + std::to_string(g.x[i]));
    }
  }
}

double nonneg_sqrt(double v) { return std::sqrt(std::max(v, 0.0)); }

ModelMoments quadrature_moments(const LinkFunction& link, const QuadratureRule& rule) {
  const Grid g = trapezoid_grid(rule);
  std::vector<double> m, s;
  conditional_values(link, g, m, s);

  // Accumulate E[h(gamma) m] and E[h(gamma) s] for the weights needed below.
  double Em = 0, Es = 0, Egm = 0, Eqm = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double x = g.x[i], w = g.w[i], q = x * x - 1.0;
    Em += w * m[i];
    Es += w * s[i];
    Egm += w * x * m[i];
    Eqm += w * q * m[i];
  }
  ModelMoments out;
  out.method = MomentMethod::quadrature;
  out.mu0 = Em;
  out.mu_ell = Egm;
  out.mu_q = 0.5 * Eqm;

  double tl = 0, tq = 0, rq = 0, eq = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double x = g.x[i], w = g.w[i], q = x * x - 1.0;
    // E[(y - c h)^2 | gamma] = s - 2 c h m + c^2 h^2
    const double zl = s[i] - 2.0 * out.mu_ell * x * m[i] + out.mu_ell * out.mu_ell * x * x;
    const double zq = s[i] - 2.0 * out.mu_q * q * m[i] + out.mu_q * out.mu_q * q * q;
    tl += w * zl;
    tq += w * zq;
    rq += w * x * x * zq;
    eq += w * q * q * zq;
  }
  out.tau_ell = nonneg_sqrt(tl);
  out.tau_q = nonneg_sqrt(tq);
  out.rho_q = nonneg_sqrt(rq);
  out.eta_q = nonneg_sqrt(eq);
  if (!std::isfinite(out.tau_q) || !std::isfinite(out.rho_q) || !std::isfinite(out.eta_q)) {
    throw NonFiniteMoment("link '" + link.id + "' has a non-finite moment");
  }
  return out;
}

struct MeanSe {
  double mean = 0, se = 0;
};

template <class F>
MeanSe sample_mean(std::size_t n, F&& term) {
  double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = term(i);
    sum += t;
    sum2 += t * t;
  }
  const double mean = sum / n;
  const double var = std::max(sum2 / n - mean * mean, 0.0) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

void sqrt_with_se(const MeanSe& v, double& value, double& se) {
  value = nonneg_sqrt(v.mean);
  se = value > 0 ? v.se / (2.0 * value) : std::sqrt(v.se);
}

ModelMoments monte_carlo_moments(const LinkFunction& link, const MonteCarloRule& rule) {
  const std::size_t n = rule.samples;
  std::vector<double> g(n), y(n);
  Rng rng(rule.seed);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = rng.normal();
    y[i] = link(g[i], rng);
    if (!std::isfinite(y[i])) {
      throw NonFiniteMoment("link '" + link.id + "' produced a non-finite observation");
    }
  }
  ModelMoments out;
  out.method = MomentMethod::monte_carlo;
  auto mu0 = sample_mean(n, [&](std::size_t i) { return y[i]; });
  auto mul = sample_mean(n, [&](std::size_t i) { return g[i] * y[i]; });
  auto muq = sample_mean(n, [&](std::size_t i) { return 0.5 * (g[i] * g[i] - 1.0) * y[i]; });
  out.mu0 = mu0.mean;
  out.std_error.mu0 = mu0.se;
  out.mu_ell = mul.mean;
  out.std_error.mu_ell = mul.se;
  out.mu_q = muq.mean;
  out.std_error.mu_q = muq.se;

  auto zq = [&](std::size_t i) { return y[i] - out.mu_q * (g[i] * g[i] - 1.0); };
  auto tl = sample_mean(n, [&](std::size_t i) {
    const double r = y[i] - out.mu_ell * g[i];
    return r * r;
  });
  auto tq = sample_mean(n, [&](std::size_t i) { return zq(i) * zq(i); });
  auto rq = sample_mean(n, [&](std::size_t i) { return g[i] * g[i] * zq(i) * zq(i); });
  auto eq = sample_mean(n, [&](std::size_t i) {
    const double q = g[i] * g[i] - 1.0;
    return q * q * zq(i) * zq(i);
  });
  sqrt_with_se(tl, out.tau_ell, out.std_error.tau_ell);
  sqrt_with_se(tq, out.tau_q, out.std_error.tau_q);
  sqrt_with_se(rq, out.rho_q, out.std_error.rho_q);
  sqrt_with_se(eq, out.eta_q, out.std_error.eta_q);
  return out;
}

double hermite(int order, double x) {
  double prev = 1.0, cur = x;
  if (order == 0) return prev;
  for (int k = 1; k < order; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

ModelMoments compute_moments(const LinkFunction& link, const IntegrationSpec& spec) {
  validate_rule(spec);
  if (const auto* q = std::get_if<QuadratureRule>(&spec)) return quadrature_moments(link, *q);
  return monte_carlo_moments(link, std::get<MonteCarloRule>(spec));
}

double hermite_coeff(const LinkFunction& link, int order, const IntegrationSpec& spec) {
  if (order < 0) throw DomainError("Hermite order must be nonnegative");
  validate_rule(spec);
  double factorial = 1.0;
  for (int k = 2; k <= order; ++k) factorial *= k;

  double total = 0.0;
  if (const auto* q = std::get_if<QuadratureRule>(&spec)) {
    const Grid g = trapezoid_grid(*q);
    std::vector<double> m, s;
    conditional_values(link, g, m, s);
    for (std::size_t i = 0; i < g.x.size(); ++i) total += g.w[i] * m[i] * hermite(order, g.x[i]);
  } else {
    const auto& mc = std::get<MonteCarloRule>(spec);
    Rng rng(mc.seed);
    for (std::uint64_t i = 0; i < mc.samples; ++i) {
      const double gamma = rng.normal();
      const double y = link(gamma, rng);
      if (!std::isfinite(y)) throw NonFiniteMoment("link '" + link.id + "' produced a non-finite observation");
      total += y * hermite(order, gamma);
    }
    total /= static_cast<double>(mc.samples);
  }
  if (!std::isfinite(total)) throw NonFiniteMoment("Hermite coefficient is not finite");
  return total / factorial;
}

double effective_noise_ratio(const ModelMoments& moments) {
  if (std::fabs(moments.mu_q) < 1e-12) throw DegenerateLink("mu_q vanishes; the lifted estimator does not apply");
  return moments.tau_q / std::fabs(moments.mu_q);
}

double variance_to_mu_ratio(const ModelMoments& moments) {
  if (std::fabs(moments.mu_q) < 1e-12) throw DegenerateLink("mu_q vanishes; the lifted estimator does not apply");
  return moments.tau_q * moments.tau_q / std::fabs(moments.mu_q);
}

}  // namespace lifted
