#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgpu/draw.hpp"

namespace rgpu {

/// Generating family of the partition of unity.
///  - Binomial: finite partition with θ cells, the Bernstein copula kernels.
///  - NegBinomial: infinite partition accumulating at 1, upper-tail dependent kernels.
enum class Family { Binomial, NegBinomial };

std::string_view to_string(Family f);
/// Accepts "binomial"/"bernsteincbp" and "negbinomial"/"negbinc".
Family parse_family(std::string_view name);

using ComponentIndex = std::int64_t;

/// Cells further out than this are numerically indistinguishable; the locator saturates here.
inline constexpr ComponentIndex kMaxComponentIndex = ComponentIndex{1} << 62;

/// Remaining prior mass below which infinite NegBinomial series are cut.
inline constexpr double kSeriesTailMass = 1e-12;
inline constexpr ComponentIndex kSeriesMaxTerms = 100000;

struct GeneratingSpec {
  Family family = Family::NegBinomial;
  double theta = 1.0;
  bool rotated = false;

  /// Validated constructor. Binomial requires integral θ ≥ 1, NegBinomial any finite θ > 0.
  static GeneratingSpec make(Family family, double theta, bool rotated = false);
  void validate() const;
  /// Number of cells, or kMaxComponentIndex for the infinite family.
  [[nodiscard]] ComponentIndex cell_count() const;
};

struct ComponentIndexPair {
  ComponentIndex j1 = 1;
  ComponentIndex j2 = 1;
};

/// Generating function φ_{i,θ}(u). Sums to one over i at any u in [0, 1].
double pmf(const GeneratingSpec& spec, ComponentIndex i, double u);
double log_pmf(const GeneratingSpec& spec, ComponentIndex i, double u);

/// Prior predictive α_i = ∫ φ_i(u) du.
double alpha(const GeneratingSpec& spec, ComponentIndex i);

/// Λ_j = α_1 + ... + α_j, with Λ_0 = 0.
double breakpoint(const GeneratingSpec& spec, ComponentIndex j);

/// h_θ(y): the unique j with Λ_{j-1} < y ≤ Λ_j. Requires 0 < y < 1.
ComponentIndex locate(const GeneratingSpec& spec, double y);

/// Number of terms used when summing NegBinomial series over the index: the first i
/// with 1 - Λ_i < kSeriesTailMass, capped at kSeriesMaxTerms. θ for Binomial.
ComponentIndex series_length(const GeneratingSpec& spec);

/// Log beta density in the form (a-1)·log x + (b-1)·log(1-x) - log B(a, b).
/// Evaluating from precomputed logs keeps repeated kernel evaluations cheap.
struct BetaKernel {
  double a_minus_1 = 0.0;
  double b_minus_1 = 0.0;
  double log_norm = 0.0;

  [[nodiscard]] double operator()(double log_x, double log_1mx) const noexcept {
    return a_minus_1 * log_x + b_minus_1 * log_1mx - log_norm;
  }
};

/// Beta kernel of cell j: Beta(j, θ-j+1) for Binomial, Beta(j, θ+1) for NegBinomial.
/// Rotation is not folded in; callers swap log u and log(1-u) instead.
BetaKernel component_kernel(const GeneratingSpec& spec, ComponentIndex j);

/// log(φ_j(u)/α_j), evaluated at 1-u when the spec is rotated. Requires 0 < u < 1.
double component_logdensity(const GeneratingSpec& spec, ComponentIndex j, double u);

/// Family plus rotation: everything besides θ that fixes the kernel shapes of a fit.
struct ModelSpec {
  Family family = Family::NegBinomial;
  bool rotated = false;

  [[nodiscard]] GeneratingSpec at(double theta) const { return GeneratingSpec::make(family, theta, rotated); }
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Log density of the stick-breaking copula given one posterior draw:
///   Σ_s ρ_s β(u | h(y_s1)) β(v | h(y_s2)) + (1 - Σ_s ρ_s) · 1
/// The unrepresented stick mass carries the uniform density, the prior-mean copula.
double mixture_logdensity(const PosteriorDraw& draw, const ModelSpec& model, double u, double v);

/// A draw with its kernels precomputed, for evaluating many points.
class DrawDensity {
 public:
  DrawDensity(const PosteriorDraw& draw, const ModelSpec& model);

  [[nodiscard]] double log_density(double u, double v) const;
  /// Same, from log u, log(1-u), log v, log(1-v) (before rotation).
  [[nodiscard]] double log_density_from_logs(double lu, double l1u, double lv, double l1v) const;
  [[nodiscard]] double remainder_mass() const noexcept { return remainder_; }

 private:
  struct Term {
    double log_weight;
    BetaKernel k1;
    BetaKernel k2;
  };
  std::vector<Term> terms_;
  double remainder_ = 0.0;
  double log_remainder_ = 0.0;
  bool rotated_ = false;
};

/// λ_U = 1 - C(2θ, θ)/4^θ of the diagonal-dominance NegBinomial GPU copula.
double upper_tail_coefficient(std::int64_t theta);

/// GPU copula with fixed diagonal weights ω_ii = α_i:  Σ_i α_i β(u|i) β(v|i).
/// NegBinomial series follow the series_length truncation and stop early once the
/// geometric tail bound of the remaining terms is below double precision.
double diagonal_copula_density(const GeneratingSpec& spec, double u, double v);

/// Evaluation point inside the open unit interval? (Shared by every module that rejects boundaries.)
inline bool is_interior(double x) noexcept { return x > 0.0 && x < 1.0; }

}  // namespace rgpu
