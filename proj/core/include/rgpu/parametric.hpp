#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "rgpu/rng.hpp"
#include "rgpu/sample.hpp"

namespace rgpu {

enum class CopulaFamily { Frank, Gumbel, Clayton, Joe, Gaussian };

std::string_view to_string(CopulaFamily f);
CopulaFamily parse_copula_family(std::string_view name);

/// One-parameter copula, optionally rotated by 180 degrees: (u, v) -> (1-u, 1-v).
///   Frank    θ ≠ 0
///   Gumbel   θ ≥ 1
///   Clayton  θ > 0
///   Joe      θ ≥ 1
///   Gaussian ρ in (-1, 1)
struct ParametricCopula {
  CopulaFamily family = CopulaFamily::Gaussian;
  double param = 0.0;
  bool rotated = false;

  static ParametricCopula make(CopulaFamily family, double param, bool rotated = false);
  void validate() const;
  /// e.g. "clayton(2)" or "rot-gumbel(2.5)".
  [[nodiscard]] std::string label() const;
};

/// Exact sampling: gamma frailty (Clayton), positive-stable frailty (Gumbel), Sibuya
/// frailty (Joe), conditional inversion (Frank), correlated normals (Gaussian).
Point sample_point(const ParametricCopula& copula, Rng& rng);
CopulaSample sample(const ParametricCopula& copula, std::size_t n, Rng& rng);

double logdensity(const ParametricCopula& copula, double u, double v);

/// Kendall's τ of the family at `param` (unrotated and rotated copulas share it).
double kendall_tau_of(CopulaFamily family, double param);
/// Inverse of kendall_tau_of on τ in (0, 1). Frank and Joe are solved by bisection.
double tau_to_param(CopulaFamily family, double tau);

struct FitResult {
  ParametricCopula copula;
  double log_likelihood = 0.0;
  double seed_log_likelihood = 0.0;
};

double log_likelihood(const ParametricCopula& copula, const CopulaSample& data);

/// Maximum likelihood by golden-section search over the family's parameter range,
/// started from the τ-inversion estimate; never returns a fit worse than that seed.
FitResult fit_mle(CopulaFamily family, const CopulaSample& data, bool rotated = false);

/// Standard normal CDF and quantile, shared by the Gaussian copula and the mixture simulator.
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace rgpu
