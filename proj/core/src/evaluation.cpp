#include "rgpu/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "rgpu/data.hpp"
#include "rgpu/error.hpp"

namespace rgpu {
namespace {

// Neumaier-compensated sum in index order.
double stable_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

// Runs body(i) for i in [0, n) over a fixed block partition. Each index is written by
// exactly one worker, so results are identical to the serial loop.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), (n + 63) / 64);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block, hi = std::min(n, lo + block);
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
}

std::vector<DrawDensity> compile(std::span<const PosteriorDraw> draws, const ModelSpec& model) {
  if (draws.empty()) throw ParameterError("no posterior draws supplied");
  std::vector<DrawDensity> out;
  out.reserve(draws.size());
  for (const auto& d : draws) out.emplace_back(d, model);
  return out;
}

// log( (1/T) Σ_t exp(l_t) )
double log_mean_exp(std::span<const double> l) {
  const double mx = *std::max_element(l.begin(), l.end());
  if (mx == -std::numeric_limits<double>::infinity()) return mx;
  double acc = 0.0;
  for (double x : l) acc += std::exp(x - mx);
  return mx + std::log(acc) - std::log(static_cast<double>(l.size()));
}

std::vector<double> log_predictive_at(const std::vector<DrawDensity>& dens, std::span<const Point> pts) {
  std::vector<double> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t j) {
    const Point& p = pts[j];
    const double lu = std::log(p.u), l1u = std::log1p(-p.u), lv = std::log(p.v), l1v = std::log1p(-p.v);
    std::vector<double> per_draw(dens.size());
    for (std::size_t t = 0; t < dens.size(); ++t) per_draw[t] = dens[t].log_density_from_logs(lu, l1u, lv, l1v);
    out[j] = log_mean_exp(per_draw);
  });
  return out;
}

// Merge sort of y counting exchanges (discordant pairs among x-untied pairs).
std::int64_t count_swaps(std::vector<double>& y, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_swaps(y, buf, lo, mid) + count_swaps(y, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (y[j] < y[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = y[j++];
    } else {
      buf[k++] = y[i++];
    }
  }
  while (i < mid) buf[k++] = y[i++];
  while (j < hi) buf[k++] = y[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            y.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

// Σ t(t-1)/2 over runs of equal values in a sorted sequence.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& equal_prev) {
  std::int64_t total = 0, run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (equal_prev(i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total + run * (run - 1) / 2;
}

void check_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParameterError("kendall tau: columns differ in length");
  if (x.size() < 2) throw DataError("kendall tau needs at least two observations");
}

double tau_b(std::int64_t n0, std::int64_t tx, std::int64_t ty, std::int64_t s) {
  const double denom = std::sqrt(static_cast<double>(n0 - tx)) * std::sqrt(static_cast<double>(n0 - ty));
  if (denom == 0.0) throw DataError("kendall tau undefined for a constant column");
  return static_cast<double>(s) / denom;
}

}  // namespace

std::vector<double> pointwise_log_predictive(std::span<const PosteriorDraw> draws, const ModelSpec& model,
                                             const CopulaSample& test) {
  test.validate();
  return log_predictive_at(compile(draws, model), test.rows);
}

LpsReport lps(std::span<const PosteriorDraw> draws, const ModelSpec& model, const CopulaSample& test,
              std::string label) {
  if (test.empty()) throw ParameterError("empty test set");
  const auto per_point = pointwise_log_predictive(draws, model, test);
  LpsReport r;
  r.label = label.empty() ? std::string(to_string(model.family)) + (model.rotated ? "-rotated" : "") : std::move(label);
  r.total = stable_sum(per_point);
  r.n_test = test.size();
  r.mean = r.total / static_cast<double>(r.n_test);
  r.n_draws = draws.size();
  return r;
}

LpsReport lps_parametric(const ParametricCopula& copula, const CopulaSample& test, std::string label) {
  if (test.empty()) throw ParameterError("empty test set");
  copula.validate();
  test.validate();
  std::vector<double> per_point(test.size());
  for (std::size_t j = 0; j < test.size(); ++j) per_point[j] = logdensity(copula, test[j].u, test[j].v);
  LpsReport r;
  r.label = label.empty() ? copula.label() : std::move(label);
  r.total = stable_sum(per_point);
  r.n_test = test.size();
  r.mean = r.total / static_cast<double>(r.n_test);
  r.n_draws = 1;
  return r;
}

CopulaSample predictive_sample(std::span<const PosteriorDraw> draws, const ModelSpec& model, std::size_t m, Rng& rng) {
  if (draws.empty()) throw ParameterError("no posterior draws supplied");
  if (m < 1) throw ParameterError("predictive sample size must be >= 1");
  CopulaSample out;
  out.rows.reserve(m);
  auto kernel_draw = [&](const GeneratingSpec& spec, double y) {
    const ComponentIndex j = locate(spec, y);
    const double a = static_cast<double>(j);
    const double b = spec.family == Family::Binomial ? spec.theta - a + 1.0 : spec.theta + 1.0;
    const auto [x, one_minus_x] = rng.beta_pair(a, b);
    return model.rotated ? one_minus_x : x;
  };
  while (out.size() < m) {
    const PosteriorDraw& d = draws[rng.below(draws.size())];
    const GeneratingSpec spec = model.at(d.theta);
    double r = rng.uniform();
    Atom atom;
    bool found = false;
    for (std::size_t s = 0; s < d.weights.size(); ++s) {
      r -= d.weights[s];
      if (r < 0.0) {
        atom = d.atoms[s];
        found = true;
        break;
      }
    }
    // Past the represented sticks, the prior continuation picks some later component;
    // whichever it is, its atom is an independent F0 (uniform) draw.
    if (!found) atom = Atom{rng.uniform(), rng.uniform()};
    const Point p{kernel_draw(spec, atom.y1), kernel_draw(spec, atom.y2)};
    if (is_interior(p.u) && is_interior(p.v)) out.rows.push_back(p);
  }
  return out;
}

DensityGrid density_grid(std::span<const PosteriorDraw> draws, const ModelSpec& model, std::size_t resolution) {
  if (resolution < 2) throw ParameterError("density grid resolution must be >= 2");
  const auto dens = compile(draws, model);
  std::vector<Point> pts;
  pts.reserve(resolution * resolution);
  const double r = static_cast<double>(resolution);
  for (std::size_t i = 0; i < resolution; ++i)
    for (std::size_t j = 0; j < resolution; ++j)
      pts.push_back({(static_cast<double>(i) + 0.5) / r, (static_cast<double>(j) + 0.5) / r});
  DensityGrid grid;
  grid.resolution = resolution;
  grid.values = log_predictive_at(dens, pts);
  for (double& v : grid.values) v = std::exp(v);
  return grid;
}

void write_density_grid(std::ostream& out, const DensityGrid& grid) {
  for (std::size_t i = 0; i < grid.resolution; ++i) {
    for (std::size_t j = 0; j < grid.resolution; ++j) {
      if (j) out << ',';
      out << format_double(grid.at(i, j));
    }
    out << '\n';
  }
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_pairs(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[idx[i]];
    ys[i] = y[idx[i]];
  }
  const auto nn = static_cast<std::int64_t>(n);
  const std::int64_t n0 = nn * (nn - 1) / 2;
  const std::int64_t tx = tied_pairs(n, [&](std::size_t i) { return xs[i] == xs[i - 1]; });
  const std::int64_t txy = tied_pairs(n, [&](std::size_t i) { return xs[i] == xs[i - 1] && ys[i] == ys[i - 1]; });
  std::vector<double> buf(n);
  const std::int64_t swaps = count_swaps(ys, buf, 0, n);
  const std::int64_t ty = tied_pairs(n, [&](std::size_t i) { return ys[i] == ys[i - 1]; });
  // concordant - discordant = n0 - tx - ty + txy - 2 * swaps
  return tau_b(n0, tx, ty, n0 - tx - ty + txy - 2 * swaps);
}

double kendall_tau(const CopulaSample& data) {
  std::vector<double> x(data.size()), y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    x[i] = data[i].u;
    y[i] = data[i].v;
  }
  return kendall_tau(x, y);
}

double kendall_tau_pairwise(std::span<const double> x, std::span<const double> y) {
  check_pairs(x, y);
  const std::size_t n = x.size();
  std::int64_t s = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0.0) ++tx;
      if (dy == 0.0) ++ty;
      if (dx * dy > 0.0) ++s;
      else if (dx * dy < 0.0) --s;
    }
  const auto nn = static_cast<std::int64_t>(n);
  return tau_b(nn * (nn - 1) / 2, tx, ty, s);
}

void write_lps_reports(std::ostream& out, std::vector<LpsReport> reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const LpsReport& a, const LpsReport& b) { return a.mean > b.mean; });
  out << "model,lps_mean,lps_total,n_test,n_draws\n";
  for (const auto& r : reports)
    out << r.label << ',' << format_double(r.mean) << ',' << format_double(r.total) << ',' << r.n_test << ','
        << r.n_draws << '\n';
}

double upper_corner_mass(const CopulaSample& data, double level) {
  if (data.empty()) return 0.0;
  const auto c = std::count_if(data.rows.begin(), data.rows.end(), [&](const Point& p) { return p.u > level && p.v > level; });
  return static_cast<double>(c) / static_cast<double>(data.size());
}

double lower_corner_mass(const CopulaSample& data, double level) {
  if (data.empty()) return 0.0;
  const auto c = std::count_if(data.rows.begin(), data.rows.end(), [&](const Point& p) { return p.u < level && p.v < level; });
  return static_cast<double>(c) / static_cast<double>(data.size());
}

}  // namespace rgpu
