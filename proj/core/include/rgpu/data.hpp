#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rgpu/rng.hpp"
#include "rgpu/sample.hpp"

namespace rgpu {

/// Raw two-column observations on their original scale.
struct RawSample {
  std::vector<std::array<double, 2>> rows;
  std::array<std::string, 2> names{"x1", "x2"};

  [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
};

/// rank / (n + 1) per column, ties sharing their average rank.
CopulaSample pseudo_observations(const RawSample& raw);

/// Two-component mixture with Gaussian margins: with probability ω a Clayton(γ) pair
/// pushed through N(μ11, σ11), N(μ12, σ12); otherwise a bivariate normal with
/// correlation ρ, means (μ21, μ22) and sds (σ21, σ22).
struct MixtureSimConfig {
  double weight = 0.5;
  double clayton = 6.0;
  double correlation = 0.6;
  std::array<double, 4> means{0.0, 0.0, 0.0, 2.0};  // μ11, μ12, μ21, μ22
  std::array<double, 4> sds{1.0, 1.0, 1.0, 1.0};    // σ11, σ12, σ21, σ22

  void validate() const;
  /// Marginal mixture CDF of coordinate k (0 or 1) at x.
  [[nodiscard]] double marginal_cdf(int k, double x) const;
};

struct MixtureSample {
  RawSample raw;
  CopulaSample copula;
};

/// The copula sample comes from the exact marginal mixture CDFs, not from ranks.
MixtureSample simulate_mixture(const MixtureSimConfig& config, std::size_t n, Rng& rng);

/// CSV with header `u,v`, 17 significant digits; reads validate interiority.
void write_sample(std::ostream& out, const CopulaSample& data);
void write_sample(const std::filesystem::path& path, const CopulaSample& data);
CopulaSample read_sample(std::istream& in, const std::string& source = "<stream>");
CopulaSample read_sample(const std::filesystem::path& path);

/// Two numeric columns with an optional header line of column names.
void write_raw(std::ostream& out, const RawSample& raw);
void write_raw(const std::filesystem::path& path, const RawSample& raw);
RawSample read_raw(std::istream& in, const std::string& source = "<stream>");
RawSample read_raw(const std::filesystem::path& path);

/// Order-preserving prefix/suffix split; requires 1 <= n_train < n.
std::pair<CopulaSample, CopulaSample> split(const CopulaSample& data, std::size_t n_train);

/// "%.17g" formatting, which strtod/from_chars read back bit-exactly.
std::string format_double(double x);

}  // namespace rgpu
