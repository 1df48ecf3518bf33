#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rgpu/draw.hpp"
#include "rgpu/parametric.hpp"
#include "rgpu/partition.hpp"
#include "rgpu/rng.hpp"
#include "rgpu/sample.hpp"

namespace rgpu {

/// Log-predictive score. `mean` (per test point) is the headline number; total = n_test · mean.
struct LpsReport {
  std::string label;
  double total = 0.0;
  double mean = 0.0;
  std::size_t n_test = 0;
  std::size_t n_draws = 0;
};

/// Σ_j log( (1/T) Σ_t c(u_j, v_j | draw t) ). Per-point values are computed
/// independently and reduced in test-set order, so the result does not depend on threading.
LpsReport lps(std::span<const PosteriorDraw> draws, const ModelSpec& model, const CopulaSample& test,
              std::string label = {});

/// Per-test-point log posterior predictive densities, in test order.
std::vector<double> pointwise_log_predictive(std::span<const PosteriorDraw> draws, const ModelSpec& model,
                                             const CopulaSample& test);

LpsReport lps_parametric(const ParametricCopula& copula, const CopulaSample& test, std::string label = {});

/// m points from the posterior predictive: uniform draw, component by weight, the
/// unrepresented stick mass mapped to a fresh F0 atom, then the two beta kernels.
CopulaSample predictive_sample(std::span<const PosteriorDraw> draws, const ModelSpec& model, std::size_t m, Rng& rng);

/// Posterior-mean density at the cell centers of a resolution × resolution grid.
/// values[i * resolution + j] is the density at (u_i, v_j) = ((i + ½)/r, (j + ½)/r).
struct DensityGrid {
  std::size_t resolution = 0;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * resolution + j]; }
};

DensityGrid density_grid(std::span<const PosteriorDraw> draws, const ModelSpec& model, std::size_t resolution);
void write_density_grid(std::ostream& out, const DensityGrid& grid);

/// Kendall's τ-b (tie corrected). O(n log n) merge-sort counting.
double kendall_tau(std::span<const double> x, std::span<const double> y);
double kendall_tau(const CopulaSample& data);
/// Same statistic by direct pair enumeration, O(n^2).
double kendall_tau_pairwise(std::span<const double> x, std::span<const double> y);

/// CSV `model,lps_mean,lps_total,n_test,n_draws`, best (largest mean) first.
void write_lps_reports(std::ostream& out, std::vector<LpsReport> reports);

/// Fraction of points with both coordinates above `level`.
double upper_corner_mass(const CopulaSample& data, double level);
double lower_corner_mass(const CopulaSample& data, double level);

}  // namespace rgpu
