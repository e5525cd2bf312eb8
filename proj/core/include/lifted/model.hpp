#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lifted/rng.hpp"

namespace lifted {

enum class LinkKind { deterministic, conditional };

/// The scalar nonlinearity y = f(gamma), or a conditional law y ~ p(y | gamma).
///
/// Deterministic links carry `eval`. Conditional links carry `sample`, which
/// must draw all of its randomness from the supplied Rng, and may carry the
/// analytic conditional moments E[y | gamma] and E[y^2 | gamma] so that
/// quadrature stays available for them.
struct LinkFunction {
  std::string id;
  LinkKind kind = LinkKind::deterministic;
  std::function<double(double)> eval;
  std::function<double(double, Rng&)> sample;
  std::function<double(double)> conditional_mean;
  std::function<double(double)> conditional_second_moment;

  /// y for this gamma. Deterministic links ignore `rng`.
  double operator()(double gamma, Rng& rng) const;
  bool has_conditional_moments() const {
    return static_cast<bool>(conditional_mean) && static_cast<bool>(conditional_second_moment);
  }
};

LinkFunction deterministic_link(std::string id, std::function<double(double)> f);
LinkFunction conditional_link(std::string id, std::function<double(double, Rng&)> sampler,
                              std::function<double(double)> mean = {},
                              std::function<double(double)> second_moment = {});

/// Builtin links:
///   linear     f(u) = u
///   quadratic  f(u) = u^2
///   abs        f(u) = |u|
///   constant   f(u) = 1
///   f1         4-level quantizer: floor(|u|) + 1/2 for |u| < 3, else 7/2
///   f2         9-level quantizer: (floor(2u^2) + 1/2)/2 for u^2 < 4, else 17/4
///   poisson    y ~ Poisson(u^2)
/// Throws ConfigError for an unknown id.
LinkFunction make_link(std::string_view id);
std::vector<std::string> builtin_link_ids();

/// Composite trapezoid rule against the standard normal density on [-radius, radius].
struct QuadratureRule {
  int nodes = 20001;
  double radius = 8.0;
};

struct MonteCarloRule {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

using IntegrationSpec = std::variant<QuadratureRule, MonteCarloRule>;

enum class MomentMethod { quadrature, monte_carlo };

/// Scalar summaries of a link against gamma ~ N(0, 1).
///
///   mu0     = E[y]
///   mu_ell  = E[gamma y]
///   tau_ell = sqrt E[(y - mu_ell gamma)^2]
///   mu_q    = E[(gamma^2 - 1) y] / 2
///   tau_q   = sqrt E[z^2],                 z = y - mu_q (gamma^2 - 1)
///   rho_q   = sqrt E[gamma^2 z^2]
///   eta_q   = sqrt E[(gamma^2 - 1)^2 z^2]
struct ModelMoments {
  struct Fields {
    double mu0 = 0, mu_ell = 0, tau_ell = 0, mu_q = 0, tau_q = 0, rho_q = 0, eta_q = 0;
  };

  double mu0 = 0, mu_ell = 0, tau_ell = 0, mu_q = 0, tau_q = 0, rho_q = 0, eta_q = 0;
  MomentMethod method = MomentMethod::quadrature;
  /// Statistical standard errors; all zero for quadrature.
  Fields std_error;
};

/// Throws ConfigError on an out-of-range rule, MissingConditionalMoments when
/// quadrature is requested for a conditional link without moment callbacks,
/// and NonFiniteMoment when an integrand is NaN or infinite.
ModelMoments compute_moments(const LinkFunction& link, const IntegrationSpec& spec = QuadratureRule{});

/// mu_i = E[y He_i(gamma)] / i!, He_i the monic (probabilists') Hermite polynomial.
double hermite_coeff(const LinkFunction& link, int order,
                     const IntegrationSpec& spec = QuadratureRule{});

/// tau_q / |mu_q|. Throws DegenerateLink when |mu_q| < 1e-12.
double effective_noise_ratio(const ModelMoments& moments);
/// tau_q^2 / |mu_q|. Throws DegenerateLink when |mu_q| < 1e-12.
double variance_to_mu_ratio(const ModelMoments& moments);

}  // namespace lifted
