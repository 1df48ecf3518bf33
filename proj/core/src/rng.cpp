#include "rgpu/rng.hpp"

#include <cmath>
#include <limits>

namespace rgpu {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::split() { return stream(++splits_); }

Rng Rng::stream(std::uint64_t key) const {
  return Rng(splitmix64(seed_ ^ splitmix64(key + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() {
  // 53 random bits shifted by half an ulp: never 0, never 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

double Rng::exponential() { return -std::log(uniform()); }

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    // Boost the shape and correct: G(a) = G(a + 1) * U^(1/a). Keeps tiny shapes in log range.
    const double g = std::gamma_distribution<double>(shape + 1.0, 1.0)(engine_);
    return g * std::exp(std::log(uniform()) / shape);
  }
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

std::pair<double, double> Rng::beta_pair(double a, double b) {
  for (;;) {
    const double x = gamma(a);
    const double y = gamma(b);
    const double s = x + y;
    if (s > 0.0 && std::isfinite(s)) return {x / s, y / s};
  }
}

std::uint64_t Rng::below(std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

}  // namespace rgpu
