#include "rgpu/parametric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rgpu/error.hpp"
#include "rgpu/evaluation.hpp"
#include "rgpu/partition.hpp"

namespace rgpu {
namespace {

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

void check_point(double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v) || !is_interior(u) || !is_interior(v))
    throw DataError("copula density requires (u, v) strictly inside the unit square");
}

// Positive stable S with Laplace transform exp(-t^a), 0 < a < 1 (Kanter / Chambers-Mallows-Stuck).
double positive_stable(double a, Rng& rng) {
  const double angle = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  const double left = std::sin(a * angle) / std::pow(std::sin(angle), 1.0 / a);
  const double right = std::pow(std::sin((1.0 - a) * angle) / w, (1.0 - a) / a);
  return left * right;
}

// Sibuya(a): P(V > k) = 1 / (k B(k, 1 - a)), inverted as in Hofert (2011).
double sibuya(double a, Rng& rng) {
  const double u = rng.uniform();
  if (u <= a) return 1.0;
  const double ginv = std::pow((1.0 - u) * std::tgamma(1.0 - a), -1.0 / a);
  const double fl = std::floor(ginv);
  if (ginv > 1.0 / std::numeric_limits<double>::epsilon()) return fl;
  if (1.0 - u >= 1.0 / (fl * boost::math::beta(fl, 1.0 - a))) return fl;
  return fl + 1.0;
}

Point sample_unrotated(CopulaFamily family, double p, Rng& rng) {
  switch (family) {
    case CopulaFamily::Clayton: {
      const double v = rng.gamma(1.0 / p);
      const double e1 = rng.exponential(), e2 = rng.exponential();
      return {std::exp(-std::log1p(e1 / v) / p), std::exp(-std::log1p(e2 / v) / p)};
    }
    case CopulaFamily::Gumbel: {
      if (p == 1.0) return {rng.uniform(), rng.uniform()};
      const double s = positive_stable(1.0 / p, rng);
      const double e1 = rng.exponential(), e2 = rng.exponential();
      return {std::exp(-std::pow(e1 / s, 1.0 / p)), std::exp(-std::pow(e2 / s, 1.0 / p))};
    }
    case CopulaFamily::Joe: {
      if (p == 1.0) return {rng.uniform(), rng.uniform()};
      const double v = sibuya(1.0 / p, rng);
      const double e1 = rng.exponential(), e2 = rng.exponential();
      return {-std::expm1(std::log(-std::expm1(-e1 / v)) / p), -std::expm1(std::log(-std::expm1(-e2 / v)) / p)};
    }
    case CopulaFamily::Frank: {
      const double u = rng.uniform();
      const double w = rng.uniform();
      const double num = w * std::expm1(-p);
      const double den = w + (1.0 - w) * std::exp(-p * u);
      return {u, -std::log1p(num / den) / p};
    }
    case CopulaFamily::Gaussian: {
      const double z1 = rng.normal();
      const double z2 = p * z1 + std::sqrt(1.0 - p * p) * rng.normal();
      return {normal_cdf(z1), normal_cdf(z2)};
    }
  }
  return {};
}

double frank_debye1(double x) {
  if (x == 0.0) return 1.0;
  const double ax = std::abs(x);
  auto f = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  double d = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, ax, 15, 1e-14) / ax;
  // D1(-x) = D1(x) + x/2
  return x > 0.0 ? d : d + ax / 2.0;
}

double joe_tau(double theta) {
  if (theta == 1.0) return 0.0;
  constexpr int kTerms = 20000;
  double sum = 0.0;
  for (int k = kTerms; k >= 1; --k) {
    const double dk = k;
    sum += 1.0 / (dk * (theta * dk + 2.0) * (theta * (dk - 1.0) + 2.0));
  }
  const double edge = kTerms + 0.5;
  sum += 1.0 / (2.0 * theta * theta * edge * edge);
  return 1.0 - 4.0 * sum;
}

template <typename F>
double bisect_increasing(F&& f, double target, double lo, double hi) {
  while (f(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw ParameterError("tau inversion failed to bracket the root");
  }
  for (int i = 0; i < 300 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct SearchRange {
  double lo, hi;
  double (*to_param)(double);
  double (*from_param)(double);
  bool lower_is_natural;  // lower end is the independence limit, a legitimate optimum
};

SearchRange search_range(CopulaFamily f) {
  switch (f) {
    case CopulaFamily::Clayton:
      return {std::log(1e-4), std::log(100.0), [](double t) { return std::exp(t); },
              [](double p) { return std::log(p); }, true};
    case CopulaFamily::Gumbel:
    case CopulaFamily::Joe:
      return {std::log(1e-8), std::log(60.0), [](double t) { return 1.0 + std::exp(t); },
              [](double p) { return std::log(std::max(p - 1.0, 1e-8)); }, true};
    case CopulaFamily::Frank:
      return {-80.0, 80.0, [](double t) { return t == 0.0 ? 1e-10 : t; }, [](double p) { return p; }, false};
    case CopulaFamily::Gaussian:
      return {-3.8, 3.8, [](double t) { return std::tanh(t); }, [](double p) { return std::atanh(p); }, false};
  }
  return {};
}

}  // namespace

std::string_view to_string(CopulaFamily f) {
  switch (f) {
    case CopulaFamily::Frank: return "frank";
    case CopulaFamily::Gumbel: return "gumbel";
    case CopulaFamily::Clayton: return "clayton";
    case CopulaFamily::Joe: return "joe";
    case CopulaFamily::Gaussian: return "gaussian";
  }
  return "?";
}

CopulaFamily parse_copula_family(std::string_view name) {
  for (auto f : {CopulaFamily::Frank, CopulaFamily::Gumbel, CopulaFamily::Clayton, CopulaFamily::Joe,
                 CopulaFamily::Gaussian})
    if (name == to_string(f)) return f;
  throw ParameterError("unknown copula family '" + std::string(name) + "'");
}

ParametricCopula ParametricCopula::make(CopulaFamily family, double param, bool rotated) {
  ParametricCopula c{family, param, rotated};
  c.validate();
  return c;
}

void ParametricCopula::validate() const {
  if (!std::isfinite(param)) throw ParameterError("copula parameter must be finite");
  switch (family) {
    case CopulaFamily::Frank:
      if (param == 0.0) throw ParameterError("frank parameter must be nonzero");
      break;
    case CopulaFamily::Gumbel:
    case CopulaFamily::Joe:
      if (param < 1.0) throw ParameterError(std::string(to_string(family)) + " parameter must be >= 1");
      break;
    case CopulaFamily::Clayton:
      if (param <= 0.0) throw ParameterError("clayton parameter must be positive");
      break;
    case CopulaFamily::Gaussian:
      if (!(param > -1.0 && param < 1.0)) throw ParameterError("gaussian correlation must be in (-1, 1)");
      break;
  }
}

std::string ParametricCopula::label() const {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, param, std::chars_format::general, 6);
  return std::string(rotated ? "rot-" : "") + std::string(to_string(family)) + "(" + std::string(buf, r.ptr) + ")";
}

Point sample_point(const ParametricCopula& copula, Rng& rng) {
  for (;;) {
    Point p = sample_unrotated(copula.family, copula.param, rng);
    if (copula.rotated) p = {1.0 - p.u, 1.0 - p.v};
    // Rounding can land a frailty draw on the boundary with negligible probability; redraw.
    if (is_interior(p.u) && is_interior(p.v)) return p;
  }
}

CopulaSample sample(const ParametricCopula& copula, std::size_t n, Rng& rng) {
  copula.validate();
  if (n < 1) throw ParameterError("sample size must be >= 1");
  CopulaSample out;
  out.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.rows.push_back(sample_point(copula, rng));
  return out;
}

double logdensity(const ParametricCopula& copula, double u, double v) {
  check_point(u, v);
  const double p = copula.param;
  // Swapping log u and log(1-u) rotates the Archimedean families. Frank and Gaussian are
  // radially symmetric, so their raw-(u, v) formulas need no change.
  double lu = std::log(u), l1u = std::log1p(-u), lv = std::log(v), l1v = std::log1p(-v);
  if (copula.rotated) {
    std::swap(lu, l1u);
    std::swap(lv, l1v);
  }
  switch (copula.family) {
    case CopulaFamily::Clayton: {
      // log(u^-p + v^-p - 1)
      const double s = log_sum_exp(-p * lu, -p * lv);
      const double lsum = s + std::log1p(-std::exp(-s));
      return std::log1p(p) - (p + 1.0) * (lu + lv) - (2.0 + 1.0 / p) * lsum;
    }
    case CopulaFamily::Gumbel: {
      const double x = -lu, y = -lv;
      const double lx = std::log(x), ly = std::log(y);
      const double lsum = log_sum_exp(p * lx, p * ly);
      const double a = std::exp(lsum / p);
      return -a + x + y + (p - 1.0) * (lx + ly) + (1.0 - 2.0 * p) * (lsum / p) + std::log(a + p - 1.0);
    }
    case CopulaFamily::Joe: {
      const double a = std::exp(p * l1u), b = std::exp(p * l1v);
      const double s = a + b * (1.0 - a);
      return (1.0 / p - 2.0) * std::log(s) + (p - 1.0) * (l1u + l1v) + std::log(p - 1.0 + s);
    }
    case CopulaFamily::Frank: {
      // e^{-pu} - e^{-p} - (1 - e^{-pu})(1 - e^{-pv}) split into two terms of one sign.
      const double a = -p * u, b = -p * v;
      const double log_d = log_sum_exp(a + std::log(std::abs(std::expm1(b))),
                                       b + std::log(std::abs(std::expm1(-p * (1.0 - v)))));
      return std::log(std::abs(p)) + std::log(std::abs(std::expm1(-p))) + a + b - 2.0 * log_d;
    }
    case CopulaFamily::Gaussian: {
      const double x = normal_quantile(u), y = normal_quantile(v);
      const double r2 = 1.0 - p * p;
      return -0.5 * std::log(r2) - (p * p * (x * x + y * y) - 2.0 * p * x * y) / (2.0 * r2);
    }
  }
  return 0.0;
}

double kendall_tau_of(CopulaFamily family, double p) {
  switch (family) {
    case CopulaFamily::Clayton: return p / (p + 2.0);
    case CopulaFamily::Gumbel: return 1.0 - 1.0 / p;
    case CopulaFamily::Gaussian: return 2.0 / std::numbers::pi * std::asin(p);
    case CopulaFamily::Frank: return 1.0 - 4.0 / p * (1.0 - frank_debye1(p));
    case CopulaFamily::Joe: return joe_tau(p);
  }
  return 0.0;
}

double tau_to_param(CopulaFamily family, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("kendall tau must lie in (0, 1)");
  switch (family) {
    case CopulaFamily::Clayton: return 2.0 * tau / (1.0 - tau);
    case CopulaFamily::Gumbel: return 1.0 / (1.0 - tau);
    case CopulaFamily::Gaussian: return std::sin(std::numbers::pi * tau / 2.0);
    case CopulaFamily::Frank:
      return bisect_increasing([](double p) { return kendall_tau_of(CopulaFamily::Frank, p); }, tau, 1e-9, 10.0);
    case CopulaFamily::Joe:
      return bisect_increasing([](double p) { return kendall_tau_of(CopulaFamily::Joe, p); }, tau, 1.0, 4.0);
  }
  return 0.0;
}

double log_likelihood(const ParametricCopula& copula, const CopulaSample& data) {
  double s = 0.0;
  for (const Point& p : data.rows) s += logdensity(copula, p.u, p.v);
  return s;
}

FitResult fit_mle(CopulaFamily family, const CopulaSample& data, bool rotated) {
  if (data.size() < 10) throw DataError("maximum likelihood fit needs at least 10 observations");
  data.validate();
  const SearchRange range = search_range(family);
  auto ll_at = [&](double t) { return log_likelihood(ParametricCopula{family, range.to_param(t), rotated}, data); };

  // Seed: invert the sample Kendall τ (rotation leaves τ unchanged).
  const double n_conc = kendall_tau(data);
  double seed_t = 0.5 * (range.lo + range.hi);
  if (n_conc > 0.0 && n_conc < 1.0) {
    seed_t = std::clamp(range.from_param(tau_to_param(family, n_conc)), range.lo, range.hi);
  } else if (n_conc <= 0.0) {
    if (family == CopulaFamily::Frank || family == CopulaFamily::Gaussian) {
      const double mirrored = tau_to_param(family, std::clamp(-n_conc, 1e-6, 1.0 - 1e-6));
      seed_t = std::clamp(range.from_param(-mirrored), range.lo, range.hi);
    } else {
      seed_t = range.lo;
    }
  }
  const double seed_ll = ll_at(seed_t);

  constexpr double kInvPhi = 0.6180339887498949;
  double a = range.lo, b = range.hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = ll_at(c), fd = ll_at(d);
  for (int i = 0; i < 200 && b - a > 1e-10; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = ll_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = ll_at(d);
    }
  }
  double best_t = 0.5 * (a + b);
  double best_ll = ll_at(best_t);
  const double span = range.hi - range.lo;
  const bool at_hi = range.hi - best_t < 1e-6 * span;
  const bool at_lo = best_t - range.lo < 1e-6 * span && !range.lower_is_natural;
  if (at_hi || at_lo) throw DataError("maximum likelihood search hit the edge of the parameter range");
  if (!(best_ll >= seed_ll)) {
    best_t = seed_t;
    best_ll = seed_ll;
  }
  return FitResult{ParametricCopula{family, range.to_param(best_t), rotated}, best_ll, seed_ll};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("normal quantile argument must be in (0, 1)");
  if (p <= 0.5) return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
}

}  // namespace rgpu
