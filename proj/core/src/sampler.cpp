#include "rgpu/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "rgpu/error.hpp"

namespace rgpu {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logistic(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }
double logit(double y) { return std::log(y) - std::log1p(-y); }
// log(y (1 - y)): density of the logit transform's Jacobian.
double log_jacobian(double y) { return std::log(y) + std::log1p(-y); }

double parse_number(std::string_view s) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParameterError("bad number '" + std::string(s) + "' in theta prior");
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// θ prior

ThetaPrior ThetaPrior::default_for(Family family) {
  return family == Family::NegBinomial ? gamma(2.0, 0.1) : geometric(0.95);
}

ThetaPrior ThetaPrior::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      params.push_back(parse_number(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw ParameterError("theta prior '" + std::string(name) + "' takes " + std::to_string(k) + " parameter(s)");
  };
  if (name == "gamma") {
    need(2);
    return gamma(params[0], params[1]);
  }
  if (name == "geometric") {
    need(1);
    return geometric(params[0]);
  }
  if (name == "uniform") {
    need(2);
    return uniform(params[0], params[1]);
  }
  throw ParameterError("unknown theta prior '" + std::string(text) + "'");
}

void ThetaPrior::validate(Family family) const {
  switch (kind) {
    case Kind::Gamma:
      if (family != Family::NegBinomial) throw ParameterError("gamma theta prior needs the negbinc model");
      if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("gamma prior needs positive shape and rate");
      break;
    case Kind::Geometric:
      if (family != Family::Binomial) throw ParameterError("geometric theta prior needs the bernsteincbp model");
      if (!(a > 0.0 && a < 1.0)) throw ParameterError("geometric prior ratio must be in (0, 1)");
      break;
    case Kind::Uniform:
      if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) throw ParameterError("uniform prior needs 0 < lo < hi");
      if (family == Family::Binomial && (a != std::floor(a) || b != std::floor(b)))
        throw ParameterError("uniform prior bounds must be integers for bernsteincbp");
      break;
  }
}

double ThetaPrior::log_density(double theta) const {
  if (!(theta > 0.0)) return kNegInf;
  switch (kind) {
    case Kind::Gamma:
      return (a - 1.0) * std::log(theta) - b * theta;
    case Kind::Geometric:
      return theta >= 1.0 ? theta * std::log(a) : kNegInf;
    case Kind::Uniform:
      return (theta >= a && theta <= b) ? 0.0 : kNegInf;
  }
  return kNegInf;
}

double ThetaPrior::sample(Family family, Rng& rng) const {
  switch (kind) {
    case Kind::Gamma:
      return rng.gamma(a) / b;
    case Kind::Geometric:
      return 1.0 + std::floor(std::log(rng.uniform()) / std::log(a));
    case Kind::Uniform:
      if (family == Family::Binomial) return a + static_cast<double>(rng.below(static_cast<std::uint64_t>(b - a) + 1));
      return a + (b - a) * rng.uniform();
  }
  return 1.0;
}

std::string ThetaPrior::to_string() const {
  auto fmt = [](double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
  };
  switch (kind) {
    case Kind::Gamma:
      return "gamma:" + fmt(a) + "," + fmt(b);
    case Kind::Geometric:
      return "geometric:" + fmt(a);
    case Kind::Uniform:
      return "uniform:" + fmt(a) + "," + fmt(b);
  }
  return {};
}

// ---------------------------------------------------------------------------
// config and adaptation

SamplerConfig SamplerConfig::defaults_for(ModelSpec model) {
  SamplerConfig cfg;
  cfg.model = model;
  cfg.theta_prior = ThetaPrior::default_for(model.family);
  return cfg;
}

void SamplerConfig::validate() const {
  if (!(concentration > 0.0) || !std::isfinite(concentration)) throw ParameterError("concentration M must be positive");
  if (iterations < 1) throw ParameterError("iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) throw ParameterError("burn-in must satisfy 0 <= burn-in < iterations");
  if (thin < 1) throw ParameterError("thinning must be >= 1");
  if (theta_hold > burn_in) throw ParameterError("theta hold must not exceed burn-in");
  theta_prior.validate(model.family);
}

double adapt_log_scale(double log_scale, double acceptance_rate, std::int64_t k, const AdaptationConfig& cfg) {
  const double gamma = std::min(cfg.max_step, 1.0 / std::sqrt(static_cast<double>(std::max<std::int64_t>(k, 1))));
  const double next = log_scale + gamma * (acceptance_rate - cfg.target_acceptance);
  return std::clamp(next, -cfg.log_scale_bound, cfg.log_scale_bound);
}

// ---------------------------------------------------------------------------
// state

std::size_t ChainState::occupied_count() const {
  const auto counts = component_counts();
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

std::vector<std::size_t> ChainState::component_counts() const {
  std::vector<std::size_t> counts(weights.size(), 0);
  for (std::size_t z : allocations) ++counts.at(z);
  return counts;
}

void ChainState::check_invariants(Family family) const {
  auto fail = [](const std::string& what) { throw InvariantError("chain state: " + what); };
  const std::size_t k = weights.size();
  if (k == 0) fail("no components");
  if (sticks.size() != k || stick_complements.size() != k || atoms.size() != k) fail("component arrays disagree in size");
  if (allocations.size() != slices.size()) fail("allocations/slices size mismatch");
  try {
    GeneratingSpec::make(family, theta);
  } catch (const ParameterError& e) {
    fail(e.what());
  }
  double rem = 1.0;
  double sum = 0.0;
  for (std::size_t s = 0; s < k; ++s) {
    const double expect = sticks[s] * rem;
    if (std::abs(weights[s] - expect) > 1e-12 * std::max(1.0, expect)) fail("stick-breaking recursion broken");
    if (!(weights[s] >= 0.0)) fail("negative weight");
    rem *= stick_complements[s];
    sum += weights[s];
    if (!is_interior(atoms[s].y1) || !is_interior(atoms[s].y2)) fail("atom outside the open unit square");
  }
  if (sum > 1.0 + 1e-12) fail("weights sum above one");
  if (std::abs(rem - remaining_mass) > 1e-12) fail("remaining mass out of sync");
  double min_slice = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < allocations.size(); ++i) {
    if (allocations[i] >= k) fail("allocation beyond the component list");
    if (!(slices[i] > 0.0 && slices[i] < weights[allocations[i]])) fail("slice not below its component weight");
    min_slice = std::min(min_slice, slices[i]);
  }
  if (!allocations.empty() && !(remaining_mass < min_slice)) fail("slice sufficiency condition violated");
}

// ---------------------------------------------------------------------------
// sampler

Sampler::Sampler(const CopulaSample& data, SamplerConfig config) : config_(std::move(config)) {
  config_.validate();
  data.validate();
  const std::size_t n = data.size();
  lu_.resize(n);
  l1u_.resize(n);
  lv_.resize(n);
  l1v_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    lu_[i] = std::log(data[i].u);
    l1u_[i] = std::log1p(-data[i].u);
    lv_[i] = std::log(data[i].v);
    l1v_[i] = std::log1p(-data[i].v);
  }
  if (config_.model.rotated) {
    lu_.swap(l1u_);
    lv_.swap(l1v_);
  }
}

ChainState Sampler::init_state() const { return init_state(Rng(config_.seed)); }

ChainState Sampler::init_state(Rng rng) const {
  if (size() < 2) throw DataError("sampler needs at least two observations");
  ChainState state;
  state.rng = rng;
  state.theta = config_.theta_prior.sample(config_.model.family, state.rng);
  state.allocations.assign(size(), 0);
  state.atoms.push_back(Atom{state.rng.uniform(), state.rng.uniform()});
  state.atom_scale.log_scale = config_.adaptation.initial_atom_log_scale;
  state.theta_scale.log_scale = config_.adaptation.initial_theta_log_scale;
  update_weights_and_slices(state);
  return state;
}

ChainState Sampler::prior_state(Rng rng) const {
  ChainState state;
  state.rng = rng;
  state.theta = config_.theta_prior.sample(config_.model.family, state.rng);
  state.atom_scale.log_scale = config_.adaptation.initial_atom_log_scale;
  state.theta_scale.log_scale = config_.adaptation.initial_theta_log_scale;
  // Allocations from the prior sticks, extended lazily.
  std::vector<double> w;
  double rem = 1.0;
  state.allocations.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const double r = state.rng.uniform();
    double cum = 0.0;
    std::size_t s = 0;
    for (;; ++s) {
      if (s == w.size()) {
        const auto [eta, one_minus] = state.rng.beta_pair(1.0, config_.concentration);
        w.push_back(rem * eta);
        rem *= one_minus;
        if (w.size() > kMaxComponents) throw InvariantError("prior allocation exceeded the component cap");
      }
      cum += w[s];
      if (r < cum || rem == 0.0) break;
    }
    state.allocations[i] = s;
  }
  const std::size_t used = size() == 0 ? 1 : *std::max_element(state.allocations.begin(), state.allocations.end()) + 1;
  for (std::size_t s = 0; s < used; ++s) state.atoms.push_back(Atom{state.rng.uniform(), state.rng.uniform()});
  // Sticks given allocations, slices, extension: the exact conditional, so the joint stays the prior.
  update_weights_and_slices(state);
  return state;
}

void Sampler::extend_sticks(ChainState& state, double min_slice) const {
  while (state.weights.empty() || !(state.remaining_mass < min_slice)) {
    if (state.weights.size() >= kMaxComponents)
      throw InvariantError("stick extension exceeded " + std::to_string(kMaxComponents) +
                           " components (min slice " + std::to_string(min_slice) + ")");
    const auto [eta, one_minus] = state.rng.beta_pair(1.0, config_.concentration);
    state.sticks.push_back(eta);
    state.stick_complements.push_back(one_minus);
    state.weights.push_back(state.remaining_mass * eta);
    state.remaining_mass *= one_minus;
    state.atoms.push_back(Atom{state.rng.uniform(), state.rng.uniform()});
    if (state.remaining_mass == 0.0) break;
  }
}

void Sampler::update_weights_and_slices(ChainState& state) const {
  const std::size_t n = state.allocations.size();
  std::size_t used = 0;
  for (std::size_t z : state.allocations) used = std::max(used, z + 1);
  std::vector<std::size_t> counts(used, 0);
  for (std::size_t z : state.allocations) ++counts[z];

  state.sticks.resize(used);
  state.stick_complements.resize(used);
  state.weights.resize(used);
  state.atoms.resize(used);
  double tail = static_cast<double>(n);
  double rem = 1.0;
  for (std::size_t s = 0; s < used; ++s) {
    const double ns = static_cast<double>(counts[s]);
    tail -= ns;
    const auto [eta, one_minus] = state.rng.beta_pair(ns + 1.0, tail + config_.concentration);
    state.sticks[s] = eta;
    state.stick_complements[s] = one_minus;
    state.weights[s] = rem * eta;
    rem *= one_minus;
  }
  state.remaining_mass = rem;

  state.slices.resize(n);
  double min_slice = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    state.slices[i] = state.weights[state.allocations[i]] * state.rng.uniform();
    min_slice = std::min(min_slice, state.slices[i]);
  }
  extend_sticks(state, min_slice);
}

std::vector<Sampler::Stats> Sampler::component_stats(const ChainState& state) const {
  std::vector<Stats> stats(state.weights.size());
  for (std::size_t i = 0; i < state.allocations.size(); ++i) {
    Stats& st = stats[state.allocations[i]];
    ++st.count;
    st.lu += lu_[i];
    st.l1u += l1u_[i];
    st.lv += lv_[i];
    st.l1v += l1v_[i];
  }
  return stats;
}

double Sampler::coord_loglik(const GeneratingSpec& spec, const Stats& st, int coord, double y) const {
  if (st.count == 0) return 0.0;
  const BetaKernel k = component_kernel(spec, locate(spec, y));
  const double sl = coord == 0 ? st.lu : st.lv;
  const double sl1 = coord == 0 ? st.l1u : st.l1v;
  return k.a_minus_1 * sl + k.b_minus_1 * sl1 - static_cast<double>(st.count) * k.log_norm;
}

double Sampler::atom_log_acceptance(const GeneratingSpec& spec, const Stats& st, int coord, double y_old,
                                    double y_new) const {
  if (!is_interior(y_new)) return kNegInf;
  double lik = 0.0;
  if (locate(spec, y_new) != locate(spec, y_old))
    lik = coord_loglik(spec, st, coord, y_new) - coord_loglik(spec, st, coord, y_old);
  return lik + log_jacobian(y_new) - log_jacobian(y_old);
}

double Sampler::atom_log_acceptance(const ChainState& state, std::size_t s, int coord, double y_new) const {
  const auto stats = component_stats(state);
  const GeneratingSpec spec = config_.model.at(state.theta);
  const Atom& a = state.atoms.at(s);
  return atom_log_acceptance(spec, stats.at(s), coord, coord == 0 ? a.y1 : a.y2, y_new);
}

void Sampler::update_atoms(ChainState& state) const {
  const auto stats = component_stats(state);
  const GeneratingSpec spec = config_.model.at(state.theta);
  const double step = std::exp(state.atom_scale.log_scale);
  std::int64_t proposed = 0, accepted = 0;
  for (std::size_t s = 0; s < state.atoms.size(); ++s) {
    Atom& atom = state.atoms[s];
    if (stats[s].count == 0) {
      atom = Atom{state.rng.uniform(), state.rng.uniform()};
      continue;
    }
    for (int coord = 0; coord < 2; ++coord) {
      double& y = coord == 0 ? atom.y1 : atom.y2;
      const double y_new = logistic(logit(y) + step * state.rng.normal());
      const double log_ratio = atom_log_acceptance(spec, stats[s], coord, y, y_new);
      ++proposed;
      if (std::log(state.rng.uniform()) < log_ratio) {
        y = y_new;
        ++accepted;
      }
    }
  }
  state.atom_scale.proposed += proposed;
  state.atom_scale.accepted += accepted;
  if (state.sweeps < config_.burn_in && proposed > 0) {
    ++state.atom_scale.batches;
    const double rate = static_cast<double>(accepted) / static_cast<double>(proposed);
    state.atom_scale.log_scale =
        adapt_log_scale(state.atom_scale.log_scale, rate, state.atom_scale.batches, config_.adaptation);
  }
}

void Sampler::update_allocations(ChainState& state) const {
  const GeneratingSpec spec = config_.model.at(state.theta);
  const std::size_t k = state.weights.size();
  std::vector<BetaKernel> k1(k), k2(k);
  for (std::size_t s = 0; s < k; ++s) {
    k1[s] = component_kernel(spec, locate(spec, state.atoms[s].y1));
    k2[s] = component_kernel(spec, locate(spec, state.atoms[s].y2));
  }
  std::vector<double> logw(k);
  std::vector<std::size_t> support;
  support.reserve(k);
  for (std::size_t i = 0; i < state.allocations.size(); ++i) {
    const double xi = state.slices[i];
    support.clear();
    double mx = kNegInf;
    for (std::size_t s = 0; s < k; ++s) {
      if (!(xi < state.weights[s])) continue;
      const double lw = k1[s](lu_[i], l1u_[i]) + k2[s](lv_[i], l1v_[i]);
      logw[support.size()] = lw;
      support.push_back(s);
      mx = std::max(mx, lw);
    }
    if (support.empty()) throw InvariantError("allocation support is empty for observation " + std::to_string(i));
    double total = 0.0;
    for (std::size_t t = 0; t < support.size(); ++t) {
      logw[t] = std::exp(logw[t] - mx);
      total += logw[t];
    }
    double r = state.rng.uniform() * total;
    std::size_t pick = support.back();
    for (std::size_t t = 0; t < support.size(); ++t) {
      r -= logw[t];
      if (r < 0.0) {
        pick = support[t];
        break;
      }
    }
    state.allocations[i] = pick;
  }
}

double Sampler::stats_loglik(const std::vector<Stats>& stats, const ChainState& state, double theta) const {
  const GeneratingSpec spec = config_.model.at(theta);
  double ll = 0.0;
  for (std::size_t s = 0; s < stats.size(); ++s) {
    if (stats[s].count == 0) continue;
    ll += coord_loglik(spec, stats[s], 0, state.atoms[s].y1) + coord_loglik(spec, stats[s], 1, state.atoms[s].y2);
  }
  return ll;
}

double Sampler::log_likelihood(const ChainState& state, double theta) const {
  return stats_loglik(component_stats(state), state, theta);
}

double Sampler::theta_log_acceptance(const ChainState& state, double theta_new) const {
  const ThetaPrior& prior = config_.theta_prior;
  const double lp_new = prior.log_density(theta_new);
  if (lp_new == kNegInf) return kNegInf;
  if (theta_new == state.theta) return 0.0;
  const auto stats = component_stats(state);
  double ratio = lp_new - prior.log_density(state.theta);
  if (config_.model.family == Family::NegBinomial) {
    ratio += stats_loglik(stats, state, theta_new) - stats_loglik(stats, state, state.theta);
    ratio += std::log(theta_new) - std::log(state.theta);
  } else {
    ratio += marginal_loglik(stats, theta_new) - marginal_loglik(stats, state.theta);
  }
  return ratio;
}

double Sampler::marginal_coord_loglik(const std::vector<BetaKernel>& kernels, const Stats& st, int coord,
                                      std::vector<double>& cell_logs) const {
  cell_logs.resize(kernels.size());
  const double sl = coord == 0 ? st.lu : st.lv;
  const double sl1 = coord == 0 ? st.l1u : st.l1v;
  const double n = static_cast<double>(st.count);
  double mx = kNegInf;
  for (std::size_t j = 0; j < kernels.size(); ++j) {
    cell_logs[j] = kernels[j].a_minus_1 * sl + kernels[j].b_minus_1 * sl1 - n * kernels[j].log_norm;
    mx = std::max(mx, cell_logs[j]);
  }
  double acc = 0.0;
  for (double l : cell_logs) acc += std::exp(l - mx);
  return mx + std::log(acc) - std::log(static_cast<double>(kernels.size()));
}

std::vector<BetaKernel> Sampler::cell_kernels(const GeneratingSpec& spec) {
  std::vector<BetaKernel> kernels(static_cast<std::size_t>(spec.cell_count()));
  for (std::size_t j = 0; j < kernels.size(); ++j) kernels[j] = component_kernel(spec, static_cast<ComponentIndex>(j + 1));
  return kernels;
}

double Sampler::marginal_loglik(const std::vector<Stats>& stats, double theta) const {
  const auto kernels = cell_kernels(config_.model.at(theta));
  std::vector<double> logs;
  double ll = 0.0;
  for (const Stats& st : stats) {
    if (st.count == 0) continue;
    ll += marginal_coord_loglik(kernels, st, 0, logs) + marginal_coord_loglik(kernels, st, 1, logs);
  }
  return ll;
}

void Sampler::redraw_occupied_atoms(ChainState& state) const {
  const GeneratingSpec spec = config_.model.at(state.theta);
  const auto kernels = cell_kernels(spec);
  const auto stats = component_stats(state);
  std::vector<double> logs;
  auto draw_coord = [&](const Stats& st, int coord) {
    static_cast<void>(marginal_coord_loglik(kernels, st, coord, logs));
    const double mx = *std::max_element(logs.begin(), logs.end());
    double total = 0.0;
    for (double& l : logs) total += (l = std::exp(l - mx));
    double r = state.rng.uniform() * total;
    std::size_t j = 0;
    while (j + 1 < logs.size() && (r -= logs[j]) >= 0.0) ++j;
    const auto cell = static_cast<ComponentIndex>(j + 1);
    while (true) {
      const double y = (static_cast<double>(j) + state.rng.uniform()) / spec.theta;
      if (is_interior(y) && locate(spec, y) == cell) return y;
    }
  };
  for (std::size_t s = 0; s < stats.size(); ++s) {
    if (stats[s].count == 0) continue;
    state.atoms[s].y1 = draw_coord(stats[s], 0);
    state.atoms[s].y2 = draw_coord(stats[s], 1);
  }
}

void Sampler::update_theta(ChainState& state) const {
  double proposal = state.theta;
  if (config_.model.family == Family::NegBinomial) {
    proposal = state.theta * std::exp(std::exp(state.theta_scale.log_scale) * state.rng.normal());
    if (!(proposal > 0.0) || !std::isfinite(proposal)) proposal = state.theta;
  } else {
    // ±1 walk; the step below 1 is a self-loop so the proposal stays symmetric.
    const bool up = state.rng.uniform() < 0.5;
    proposal = up ? state.theta + 1.0 : std::max(1.0, state.theta - 1.0);
  }
  const double log_ratio = theta_log_acceptance(state, proposal);
  ++state.theta_scale.proposed;
  const bool accept = std::log(state.rng.uniform()) < log_ratio;
  if (accept) {
    ++state.theta_scale.accepted;
    if (proposal != state.theta) {
      state.theta = proposal;
      if (config_.model.family == Family::Binomial) redraw_occupied_atoms(state);
    }
  }
  if (config_.model.family == Family::NegBinomial && state.sweeps < config_.burn_in) {
    ++state.theta_scale.batches;
    state.theta_scale.log_scale =
        adapt_log_scale(state.theta_scale.log_scale, accept ? 1.0 : 0.0, state.theta_scale.batches, config_.adaptation);
  }
}

void Sampler::sweep(ChainState& state) const {
  update_weights_and_slices(state);
  update_atoms(state);
  update_allocations(state);
  if (state.sweeps >= config_.theta_hold_sweeps()) update_theta(state);
  ++state.sweeps;
}

PosteriorDraw Sampler::snapshot(const ChainState& state, std::int64_t iteration) const {
  PosteriorDraw d;
  d.theta = state.theta;
  d.iteration = iteration;
  for (std::size_t s = 0; s < state.weights.size(); ++s) {
    if (state.weights[s] > kEmissionFloor) {
      d.weights.push_back(state.weights[s]);
      d.atoms.push_back(state.atoms[s]);
    }
  }
  return d;
}

ChainResult run_chain(const CopulaSample& data, const SamplerConfig& config,
                      const std::function<void(std::int64_t, const ChainState&)>& on_sweep) {
  const Sampler sampler(data, config);
  ChainState state = data.empty() ? sampler.prior_state(Rng(config.seed)) : sampler.init_state();
  ChainResult result;
  result.draws.reserve(static_cast<std::size_t>(config.retained_draws()));
  std::int64_t post_proposed_atoms = 0, post_accepted_atoms = 0;
  std::int64_t post_proposed_theta = 0, post_accepted_theta = 0;
  for (std::int64_t it = 0; it < config.iterations; ++it) {
    if (it == config.burn_in) {
      post_proposed_atoms = state.atom_scale.proposed;
      post_accepted_atoms = state.atom_scale.accepted;
      post_proposed_theta = state.theta_scale.proposed;
      post_accepted_theta = state.theta_scale.accepted;
    }
    sampler.sweep(state);
    result.diagnostics.max_components = std::max(result.diagnostics.max_components, state.component_count());
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == config.thin - 1) {
      result.draws.push_back(sampler.snapshot(state, it + 1));
      result.diagnostics.occupied_trace.push_back(state.occupied_count());
    }
    if (on_sweep) on_sweep(it, state);
  }
  auto rate = [](std::int64_t acc, std::int64_t prop) {
    return prop > 0 ? static_cast<double>(acc) / static_cast<double>(prop) : 0.0;
  };
  auto& diag = result.diagnostics;
  diag.atom_acceptance = rate(state.atom_scale.accepted - post_accepted_atoms, state.atom_scale.proposed - post_proposed_atoms);
  diag.theta_acceptance =
      rate(state.theta_scale.accepted - post_accepted_theta, state.theta_scale.proposed - post_proposed_theta);
  diag.final_atom_log_scale = state.atom_scale.log_scale;
  diag.final_theta_log_scale = state.theta_scale.log_scale;
  diag.final_occupied = state.occupied_count();
  diag.final_components = state.component_count();
  return result;
}

}  // namespace rgpu
