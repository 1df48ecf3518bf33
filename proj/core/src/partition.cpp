#include "rgpu/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "rgpu/error.hpp"

namespace rgpu {
namespace {

double lgam(double x) { return boost::math::lgamma(x); }

// lgamma(a) - lgamma(a + b). The direct difference cancels catastrophically once a
// reaches ~1e6 (far NegBinomial cells), so switch to the Stirling difference there.
double log_gamma_ratio(double a, double b) {
  if (a < 1e6) return lgam(a) - lgam(a + b);
  const double s = a + b;
  const double stirling = (s - 0.5) * std::log1p(b / a) + b * std::log(a) - b;
  const double correction = -b / (12.0 * a * s);
  return -(stirling + correction);
}

double log_beta_fn(double a, double b) {
  if (a < b) std::swap(a, b);
  return lgam(b) + log_gamma_ratio(a, b);
}

// x * log(y) with the 0 * log(0) = 0 convention.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

void check_index(const GeneratingSpec& spec, ComponentIndex i) {
  if (i < 1) throw ParameterError("component index must be >= 1");
  if (spec.family == Family::Binomial && static_cast<double>(i) > spec.theta)
    throw ParameterError("component index " + std::to_string(i) + " exceeds binomial order " +
                         std::to_string(static_cast<long long>(spec.theta)));
}

void check_interior(double u, const char* what) {
  if (!std::isfinite(u) || !is_interior(u))
    throw ParameterError(std::string(what) + " must lie strictly inside (0, 1)");
}

}  // namespace

std::string_view to_string(Family f) {
  return f == Family::Binomial ? "bernsteincbp" : "negbinc";
}

Family parse_family(std::string_view name) {
  if (name == "binomial" || name == "bernsteincbp" || name == "bernstein") return Family::Binomial;
  if (name == "negbinomial" || name == "negbinc" || name == "negbin") return Family::NegBinomial;
  throw ParameterError("unknown generating family '" + std::string(name) + "'");
}

GeneratingSpec GeneratingSpec::make(Family family, double theta, bool rotated) {
  GeneratingSpec spec{family, theta, rotated};
  spec.validate();
  return spec;
}

void GeneratingSpec::validate() const {
  if (!std::isfinite(theta) || theta <= 0.0) throw ParameterError("theta must be a finite positive number");
  if (family == Family::Binomial && (theta != std::floor(theta) || theta > 1e9))
    throw ParameterError("binomial theta must be a positive integer");
}

ComponentIndex GeneratingSpec::cell_count() const {
  return family == Family::Binomial ? static_cast<ComponentIndex>(theta) : kMaxComponentIndex;
}

double log_pmf(const GeneratingSpec& spec, ComponentIndex i, double u) {
  check_index(spec, i);
  if (!std::isfinite(u) || u < 0.0 || u > 1.0) throw ParameterError("pmf argument must lie in [0, 1]");
  const double th = spec.theta;
  const double k = static_cast<double>(i - 1);
  if (spec.family == Family::Binomial) {
    const double n = th - 1.0;
    const double lchoose = lgam(n + 1.0) - lgam(k + 1.0) - lgam(n - k + 1.0);
    return lchoose + xlogy(k, u) + xlogy(n - k, 1.0 - u);
  }
  const double lcoef = lgam(th + k) - lgam(th) - lgam(k + 1.0);
  return lcoef + xlogy(th, 1.0 - u) + xlogy(k, u);
}

double pmf(const GeneratingSpec& spec, ComponentIndex i, double u) { return std::exp(log_pmf(spec, i, u)); }

double alpha(const GeneratingSpec& spec, ComponentIndex i) {
  check_index(spec, i);
  const double th = spec.theta;
  if (spec.family == Family::Binomial) return 1.0 / th;
  const double d = static_cast<double>(i);
  return th / ((th + d - 1.0) * (th + d));
}

double breakpoint(const GeneratingSpec& spec, ComponentIndex j) {
  if (j < 0) throw ParameterError("breakpoint index must be >= 0");
  const double d = static_cast<double>(j);
  if (spec.family == Family::Binomial) {
    if (d > spec.theta) throw ParameterError("breakpoint index exceeds binomial order");
    return d / spec.theta;
  }
  return d / (spec.theta + d);
}

ComponentIndex locate(const GeneratingSpec& spec, double y) {
  check_interior(y, "locator argument");
  if (spec.family == Family::Binomial) {
    const auto cells = static_cast<ComponentIndex>(spec.theta);
    auto j = std::clamp(static_cast<ComponentIndex>(std::ceil(spec.theta * y)), ComponentIndex{1}, cells);
    while (j < cells && y > breakpoint(spec, j)) ++j;
    while (j > 1 && y <= breakpoint(spec, j - 1)) --j;
    return j;
  }
  const double t = spec.theta * y / (1.0 - y);
  if (t >= static_cast<double>(kMaxComponentIndex)) return kMaxComponentIndex;
  auto j = std::max(ComponentIndex{1}, static_cast<ComponentIndex>(std::ceil(t)));
  while (j < kMaxComponentIndex && y > breakpoint(spec, j)) ++j;
  while (j > 1 && y <= breakpoint(spec, j - 1)) --j;
  return j;
}

ComponentIndex series_length(const GeneratingSpec& spec) {
  if (spec.family == Family::Binomial) return static_cast<ComponentIndex>(spec.theta);
  // 1 - Λ_i = θ / (θ + i) < tail  <=>  i > θ (1/tail - 1)
  const double needed = std::floor(spec.theta * (1.0 / kSeriesTailMass - 1.0)) + 1.0;
  if (needed >= static_cast<double>(kSeriesMaxTerms)) return kSeriesMaxTerms;
  return static_cast<ComponentIndex>(needed);
}

BetaKernel component_kernel(const GeneratingSpec& spec, ComponentIndex j) {
  check_index(spec, j);
  const double a = static_cast<double>(j);
  const double b = spec.family == Family::Binomial ? spec.theta - a + 1.0 : spec.theta + 1.0;
  return BetaKernel{a - 1.0, b - 1.0, log_beta_fn(a, b)};
}

double component_logdensity(const GeneratingSpec& spec, ComponentIndex j, double u) {
  check_interior(u, "density argument");
  const BetaKernel k = component_kernel(spec, j);
  const double lu = std::log(u);
  const double l1u = std::log1p(-u);
  return spec.rotated ? k(l1u, lu) : k(lu, l1u);
}

DrawDensity::DrawDensity(const PosteriorDraw& draw, const ModelSpec& model) : rotated_(model.rotated) {
  if (draw.weights.empty()) throw ParameterError("posterior draw has no components");
  if (draw.weights.size() != draw.atoms.size()) throw ParameterError("posterior draw weights/atoms size mismatch");
  const GeneratingSpec spec = model.at(draw.theta);
  // Neumaier summation keeps the remainder accurate when it is tiny.
  double sum = 0.0, comp = 0.0;
  terms_.reserve(draw.weights.size());
  for (std::size_t s = 0; s < draw.weights.size(); ++s) {
    const double w = draw.weights[s];
    if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("posterior draw weights must be positive");
    const Atom& a = draw.atoms[s];
    if (!is_interior(a.y1) || !is_interior(a.y2)) throw ParameterError("posterior draw atoms must be interior");
    const double t = sum + w;
    comp += std::abs(sum) >= std::abs(w) ? (sum - t) + w : (w - t) + sum;
    sum = t;
    terms_.push_back(Term{std::log(w), component_kernel(spec, locate(spec, a.y1)),
                          component_kernel(spec, locate(spec, a.y2))});
  }
  const double total = sum + comp;
  if (total > 1.0 + 1e-10) throw ParameterError("posterior draw weights sum above one");
  remainder_ = std::max(0.0, (1.0 - sum) - comp);
  log_remainder_ = remainder_ > 0.0 ? std::log(remainder_) : -std::numeric_limits<double>::infinity();
}

double DrawDensity::log_density_from_logs(double lu, double l1u, double lv, double l1v) const {
  if (rotated_) {
    std::swap(lu, l1u);
    std::swap(lv, l1v);
  }
  double mx = log_remainder_;
  for (const Term& t : terms_) mx = std::max(mx, t.log_weight + t.k1(lu, l1u) + t.k2(lv, l1v));
  double acc = remainder_ > 0.0 ? std::exp(log_remainder_ - mx) : 0.0;
  for (const Term& t : terms_) acc += std::exp(t.log_weight + t.k1(lu, l1u) + t.k2(lv, l1v) - mx);
  return mx + std::log(acc);
}

double DrawDensity::log_density(double u, double v) const {
  check_interior(u, "density argument u");
  check_interior(v, "density argument v");
  return log_density_from_logs(std::log(u), std::log1p(-u), std::log(v), std::log1p(-v));
}

double mixture_logdensity(const PosteriorDraw& draw, const ModelSpec& model, double u, double v) {
  return DrawDensity(draw, model).log_density(u, v);
}

double upper_tail_coefficient(std::int64_t theta) {
  if (theta < 1) throw ParameterError("tail coefficient requires integer theta >= 1");
  const double t = static_cast<double>(theta);
  const double log_ratio = lgam(2.0 * t + 1.0) - 2.0 * lgam(t + 1.0) - t * std::log(4.0);
  return -std::expm1(log_ratio);
}

double diagonal_copula_density(const GeneratingSpec& spec, double u, double v) {
  check_interior(u, "density argument u");
  check_interior(v, "density argument v");
  if (spec.rotated) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  const double lu = std::log(u), l1u = std::log1p(-u);
  const double lv = std::log(v), l1v = std::log1p(-v);
  const double th = spec.theta;
  double sum = 0.0;
  if (spec.family == Family::Binomial) {
    for (ComponentIndex i = 1; i <= static_cast<ComponentIndex>(th); ++i) {
      const BetaKernel k = component_kernel(spec, i);
      sum += alpha(spec, i) * std::exp(k(lu, l1u) + k(lv, l1v));
    }
    return sum;
  }
  // term_i = φ_i(u) φ_i(v) / α_i, advanced by the ratio of consecutive pmf values.
  const ComponentIndex n = series_length(spec);
  double log_phi_u = th * l1u;
  double log_phi_v = th * l1v;
  for (ComponentIndex i = 1; i <= n; ++i) {
    const double d = static_cast<double>(i);
    const double term = std::exp(log_phi_u + log_phi_v - std::log(alpha(spec, i)));
    sum += term;
    const double grow = 1.0 + (th + 1.0) / d;
    const double r_sup = u * v * grow * grow;
    if (r_sup < 1.0 && term * r_sup / (1.0 - r_sup) < 1e-17 * sum) break;
    const double step = std::log(th + d - 1.0) - std::log(d);
    log_phi_u += lu + step;
    log_phi_v += lv + step;
  }
  return sum;
}

}  // namespace rgpu
