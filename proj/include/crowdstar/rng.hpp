#pragma once

#include <cstdint>
#include <string_view>

namespace crowdstar::sim {

// splitmix64. Self-contained so that generated logs are byte-identical
// across runs and toolchains; std::<distribution> makes no such promise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform01();  // [0, 1)
  double uniform(double lo, double hi);
  bool bernoulli(double p);
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive
  double normal();  // standard normal, Box-Muller
  std::int64_t poisson(double lambda);
  // scale * exp(sigma * z): median `scale`, heavier right tail with sigma.
  double lognormal(double scale, double sigma);

 private:
  std::uint64_t state_;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b);
std::uint64_t hash_str(std::string_view s);  // FNV-1a

// Deterministic per-decision stream: hash the labels, mix with the seed.
Rng derived_rng(std::uint64_t seed, std::initializer_list<std::string_view> labels);

}  // namespace crowdstar::sim
