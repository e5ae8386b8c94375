#include "crowdstar/rng.hpp"

#include <cmath>
#include <numbers>

namespace crowdstar::sim {

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

bool Rng::bernoulli(double p) { return uniform01() < p; }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(next() % span);
}

double Rng::normal() {
  const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t Rng::poisson(double lambda) {
  if (lambda <= 0.0) return 0;
  if (lambda > 50.0) {
    // Normal approximation; exact Knuth sampling underflows exp(-lambda).
    const double draw = lambda + std::sqrt(lambda) * normal();
    return draw > 0.0 ? static_cast<std::int64_t>(std::llround(draw)) : 0;
  }
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double product = 1.0;
  do {
    k += 1;
    product *= uniform01();
  } while (product > limit);
  return k - 1;
}

double Rng::lognormal(double scale, double sigma) { return scale * std::exp(sigma * normal()); }

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Rng derived_rng(std::uint64_t seed, std::initializer_list<std::string_view> labels) {
  std::uint64_t h = seed;
  for (std::string_view label : labels) h = mix(h, hash_str(label));
  return Rng(h);
}

}  // namespace crowdstar::sim
