#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace rgpu {

/// Seeded random stream with counter-based splitting.
///
/// Child streams are derived from (seed, split counter) by SplitMix64 mixing, so
/// the stream a child receives depends only on the order of `split()` calls on the
/// parent, never on scheduling. All draws go through the std:: distributions and
/// are reproducible on one platform/toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream; advances the split counter.
  Rng split();
  /// Child stream keyed by an explicit stream id; does not touch the counter.
  [[nodiscard]] Rng stream(std::uint64_t key) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential();
  double gamma(double shape);
  /// Beta(a, b) returned as (x, 1 - x), both computed from the gamma pair so the
  /// complement keeps full relative precision near 1.
  std::pair<double, double> beta_pair(double a, double b);
  double beta(double a, double b) { return beta_pair(a, b).first; }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t splits_ = 0;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace rgpu
