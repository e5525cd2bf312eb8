#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lifted {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Sub-seed for stream `index` of `seed`. Stable across releases: results
/// written to disk depend on it.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

/// Random source used everywhere in the library.
///
/// The engine is std::mt19937_64 seeded with splitmix64(seed). Uniforms take
/// the top 53 bits of one engine draw; normals use the Marsaglia polar method;
/// Poisson variates use sequential inversion below mean 10 and the PTRS
/// transformed-rejection sampler (Hoermann 1993) above. None of these depend
/// on the standard library's distribution implementations, so a seed yields
/// the same stream on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lifted
