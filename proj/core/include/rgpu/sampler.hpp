#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rgpu/draw.hpp"
#include "rgpu/partition.hpp"
#include "rgpu/rng.hpp"
#include "rgpu/sample.hpp"

namespace rgpu {

/// Prior p(θ) on the smoothing parameter.
///   gamma:shape,rate      continuous θ, NegBinomial only
///   geometric:q           p(θ) ∝ q^θ on {1, 2, ...}, Binomial only
///   uniform:lo,hi         continuous on (lo, hi) for NegBinomial, integers lo..hi for Binomial
struct ThetaPrior {
  enum class Kind { Gamma, Geometric, Uniform };

  Kind kind = Kind::Gamma;
  double a = 2.0;
  double b = 0.1;

  static ThetaPrior gamma(double shape, double rate) { return {Kind::Gamma, shape, rate}; }
  static ThetaPrior geometric(double q) { return {Kind::Geometric, q, 0.0}; }
  static ThetaPrior uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
  static ThetaPrior default_for(Family family);
  /// Parses "name:p1,p2" as listed above.
  static ThetaPrior parse(std::string_view text);

  void validate(Family family) const;
  /// Unnormalized log density (log pmf for Binomial); -inf outside the support.
  [[nodiscard]] double log_density(double theta) const;
  double sample(Family family, Rng& rng) const;
  [[nodiscard]] std::string to_string() const;
};

struct AdaptationConfig {
  double target_acceptance = 0.44;
  double max_step = 0.01;
  double log_scale_bound = 10.0;
  double initial_atom_log_scale = 0.0;
  double initial_theta_log_scale = -1.0;
};

struct SamplerConfig {
  ModelSpec model;
  double concentration = 1.0;
  ThetaPrior theta_prior = ThetaPrior::default_for(Family::NegBinomial);
  std::int64_t iterations = 20000;
  std::int64_t burn_in = 10000;
  std::int64_t thin = 1;
  std::uint64_t seed = 1;
  /// Sweeps at the start of burn-in during which θ keeps its initial prior draw, so that the
  /// partition can form before θ responds to it. Negative: burn_in / 10.
  std::int64_t theta_hold = -1;
  AdaptationConfig adaptation;

  /// Config for `model` with that family's default θ prior.
  static SamplerConfig defaults_for(ModelSpec model);
  void validate() const;
  [[nodiscard]] std::int64_t retained_draws() const { return (iterations - burn_in) / thin; }
  [[nodiscard]] std::int64_t theta_hold_sweeps() const { return theta_hold < 0 ? burn_in / 10 : theta_hold; }
};

/// log-scale update of the adaptive random walk: step γ_k (rate - target) with
/// γ_k = min(max_step, k^-1/2), clamped to ±log_scale_bound.
double adapt_log_scale(double log_scale, double acceptance_rate, std::int64_t k, const AdaptationConfig& cfg);

struct AdaptiveScale {
  double log_scale = 0.0;
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
  std::int64_t batches = 0;

  [[nodiscard]] double acceptance_rate() const {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

/// Full MCMC state. Component positions and allocations are 0-based.
struct ChainState {
  double theta = 1.0;
  std::vector<double> sticks;             // η_s
  std::vector<double> stick_complements;  // 1 - η_s, kept separately for precision
  std::vector<double> weights;            // ρ_s = η_s Π_{l<s} (1 - η_l)
  double remaining_mass = 1.0;            // Π_s (1 - η_s) = 1 - Σ ρ_s
  std::vector<Atom> atoms;
  std::vector<std::size_t> allocations;
  std::vector<double> slices;
  AdaptiveScale atom_scale;
  AdaptiveScale theta_scale;
  std::int64_t sweeps = 0;
  Rng rng{0};

  [[nodiscard]] std::size_t component_count() const noexcept { return weights.size(); }
  [[nodiscard]] std::size_t occupied_count() const;
  [[nodiscard]] std::vector<std::size_t> component_counts() const;
  /// Weight recursion, slice sufficiency and allocation support. Throws InvariantError.
  void check_invariants(Family family) const;
};

/// Per-sweep diagnostics retained by run_chain.
struct ChainDiagnostics {
  double atom_acceptance = 0.0;
  double theta_acceptance = 0.0;
  double final_atom_log_scale = 0.0;
  double final_theta_log_scale = 0.0;
  std::size_t final_occupied = 0;
  std::size_t final_components = 0;
  std::size_t max_components = 0;
  std::vector<std::size_t> occupied_trace;  // one entry per retained draw
};

struct ChainResult {
  std::vector<PosteriorDraw> draws;
  ChainDiagnostics diagnostics;
};

/// Slice-sampler Gibbs scheme for the stick-breaking GPU copula.
/// The data are read through precomputed log u, log(1-u), log v, log(1-v), already
/// swapped when the model is rotated.
class Sampler {
 public:
  Sampler(const CopulaSample& data, SamplerConfig config);

  [[nodiscard]] const SamplerConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::size_t size() const noexcept { return lu_.size(); }

  /// One component holding every observation, θ from its prior, atoms from F0. Needs n ≥ 2.
  [[nodiscard]] ChainState init_state() const;
  [[nodiscard]] ChainState init_state(Rng rng) const;
  /// Exact draw of (θ, sticks, atoms, allocations, slices) from the prior; any n, including 0.
  [[nodiscard]] ChainState prior_state(Rng rng) const;

  void update_weights_and_slices(ChainState& state) const;
  void update_atoms(ChainState& state) const;
  void update_allocations(ChainState& state) const;
  void update_theta(ChainState& state) const;
  /// Steps 1-4 in order, then adaptation bookkeeping.
  void sweep(ChainState& state) const;

  /// Log MH acceptance ratio for moving atom coordinate (0 or 1) of component s to y_new
  /// under the logit random walk (includes the Jacobian).
  [[nodiscard]] double atom_log_acceptance(const ChainState& state, std::size_t s, int coord, double y_new) const;
  /// Log MH acceptance ratio for θ → θ_new. NegBinomial: log-scale walk with Jacobian, atoms held
  /// fixed. Binomial: atoms of occupied components integrated out over the θ cells, and redrawn
  /// from their exact conditional when the move is accepted.
  [[nodiscard]] double theta_log_acceptance(const ChainState& state, double theta_new) const;
  /// Σ_i log β(u_i | h(y_{z_i,1})) + log β(v_i | h(y_{z_i,2})) at the given θ.
  [[nodiscard]] double log_likelihood(const ChainState& state, double theta) const;

  /// Components with weight above the emission floor.
  [[nodiscard]] PosteriorDraw snapshot(const ChainState& state, std::int64_t iteration) const;

 private:
  struct Stats {
    std::size_t count = 0;
    double lu = 0.0, l1u = 0.0, lv = 0.0, l1v = 0.0;
  };
  [[nodiscard]] std::vector<Stats> component_stats(const ChainState& state) const;
  [[nodiscard]] double coord_loglik(const GeneratingSpec& spec, const Stats& st, int coord, double y) const;
  [[nodiscard]] double atom_log_acceptance(const GeneratingSpec& spec, const Stats& st, int coord, double y_old,
                                           double y_new) const;
  [[nodiscard]] double stats_loglik(const std::vector<Stats>& stats, const ChainState& state, double theta) const;
  /// log((1/θ) Σ_j L(j)) over the θ cells of a Binomial partition; per-cell L(j) left in cell_logs.
  [[nodiscard]] double marginal_coord_loglik(const std::vector<BetaKernel>& kernels, const Stats& st, int coord,
                                             std::vector<double>& cell_logs) const;
  static std::vector<BetaKernel> cell_kernels(const GeneratingSpec& spec);
  [[nodiscard]] double marginal_loglik(const std::vector<Stats>& stats, double theta) const;
  void redraw_occupied_atoms(ChainState& state) const;
  void extend_sticks(ChainState& state, double min_slice) const;

  SamplerConfig config_;
  std::vector<double> lu_, l1u_, lv_, l1v_;
};

inline constexpr double kEmissionFloor = 1e-12;
inline constexpr std::size_t kMaxComponents = 1000000;

/// Runs the full chain: init (the exact prior state when data is empty), `iterations` sweeps, adaptation during burn-in only,
/// every `thin`-th post-burn-in state emitted. Deterministic given config.seed.
ChainResult run_chain(const CopulaSample& data, const SamplerConfig& config,
                      const std::function<void(std::int64_t, const ChainState&)>& on_sweep = {});

}  // namespace rgpu
