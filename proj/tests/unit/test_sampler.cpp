#include <gtest/gtest.h>

#include <boost/math/distributions/gamma.hpp>
#include <cmath>
#include <map>

#include "rgpu/error.hpp"
#include "rgpu/parametric.hpp"
#include "rgpu/sampler.hpp"
#include "sampler_oracles.hpp"
#include "test_util.hpp"

namespace rgpu {
namespace {

CopulaSample gumbel_data(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(ParametricCopula::make(CopulaFamily::Gumbel, 2.0), n, rng);
}

SamplerConfig config(Family family, bool rotated = false) {
  SamplerConfig cfg = SamplerConfig::defaults_for({family, rotated});
  cfg.iterations = 200;
  cfg.burn_in = 100;
  return cfg;
}

using test::log_beta_pdf;

// ---------------------------------------------------------------------------
// configuration

TEST(ThetaPriorTest, ParseAndPrint) {
  EXPECT_EQ(ThetaPrior::parse("gamma:2,0.1").to_string(), "gamma:2,0.1");
  EXPECT_EQ(ThetaPrior::parse("geometric:0.95").to_string(), "geometric:0.95");
  EXPECT_EQ(ThetaPrior::parse("uniform:1,8").kind, ThetaPrior::Kind::Uniform);
  EXPECT_THROW(ThetaPrior::parse("gamma:2"), ParameterError);
  EXPECT_THROW(ThetaPrior::parse("lognormal:1,2"), ParameterError);
  EXPECT_THROW(ThetaPrior::parse("gamma:a,b"), ParameterError);
}

TEST(ThetaPriorTest, FamilyCompatibility) {
  EXPECT_NO_THROW(ThetaPrior::gamma(2, 0.1).validate(Family::NegBinomial));
  EXPECT_THROW(ThetaPrior::gamma(2, 0.1).validate(Family::Binomial), ParameterError);
  EXPECT_THROW(ThetaPrior::geometric(0.95).validate(Family::NegBinomial), ParameterError);
  EXPECT_THROW(ThetaPrior::uniform(1.5, 4).validate(Family::Binomial), ParameterError);
  EXPECT_NO_THROW(ThetaPrior::uniform(1.5, 4).validate(Family::NegBinomial));
  EXPECT_THROW(ThetaPrior::geometric(1.0).validate(Family::Binomial), ParameterError);
}

TEST(ThetaPriorTest, Defaults) {
  EXPECT_EQ(ThetaPrior::default_for(Family::NegBinomial).to_string(), "gamma:2,0.1");
  EXPECT_EQ(ThetaPrior::default_for(Family::Binomial).to_string(), "geometric:0.95");
  const SamplerConfig cfg;
  EXPECT_EQ(cfg.concentration, 1.0);
  EXPECT_EQ(cfg.iterations, 20000);
  EXPECT_EQ(cfg.burn_in, 10000);
  EXPECT_EQ(cfg.thin, 1);
}

TEST(SamplerConfigTest, Validation) {
  auto cfg = config(Family::NegBinomial);
  cfg.burn_in = cfg.iterations;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = config(Family::NegBinomial);
  cfg.concentration = 0.0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = config(Family::NegBinomial);
  cfg.thin = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = config(Family::Binomial);
  cfg.theta_prior = ThetaPrior::gamma(2, 1);
  EXPECT_THROW(cfg.validate(), ParameterError);
}

TEST(SamplerConfigTest, RetainedDrawCount) {
  auto cfg = config(Family::NegBinomial);
  cfg.iterations = 100;
  cfg.burn_in = 50;
  cfg.thin = 5;
  EXPECT_EQ(cfg.retained_draws(), 10);
  EXPECT_EQ(run_chain(gumbel_data(20, 1), cfg).draws.size(), 10u);
}

// ---------------------------------------------------------------------------
// adaptation

TEST(Adaptation, FixedPointAtTarget) {
  const AdaptationConfig cfg;
  EXPECT_EQ(adapt_log_scale(0.3, 0.44, 5, cfg), 0.3);
}

TEST(Adaptation, MonotoneUntilClamped) {
  const AdaptationConfig cfg;
  double s = 0.0;
  for (std::int64_t k = 1; k <= 1000; ++k) {
    const double next = adapt_log_scale(s, 1.0, k, cfg);
    EXPECT_GE(next, s);
    s = next;
  }
  EXPECT_NEAR(s, 0.56 * 0.01 * 1000, 1e-9);
  for (std::int64_t k = 1001; k < 5000; ++k) s = adapt_log_scale(s, 1.0, k, cfg);
  EXPECT_EQ(s, cfg.log_scale_bound);
  EXPECT_EQ(adapt_log_scale(-10.0, 0.0, 1, cfg), -cfg.log_scale_bound);
}

TEST(Adaptation, StepSizesDiminish) {
  const AdaptationConfig cfg;
  // γ_k = min(0.01, k^-1/2): visible as the response to a unit deviation.
  EXPECT_NEAR(adapt_log_scale(0.0, 1.44, 1, cfg), 0.01, 1e-15);
  EXPECT_NEAR(adapt_log_scale(0.0, 1.44, 40000, cfg), 0.005, 1e-15);
  EXPECT_NEAR(adapt_log_scale(0.0, 1.44, 1000000, cfg), 0.001, 1e-15);
}

// ---------------------------------------------------------------------------
// init and weights

TEST(Init, OneComponentHoldsEverything) {
  const auto data = gumbel_data(10, 3);
  const Sampler sampler(data, config(Family::NegBinomial));
  const ChainState st = sampler.init_state();
  EXPECT_GE(st.component_count(), 1u);
  for (std::size_t z : st.allocations) EXPECT_EQ(z, 0u);
  EXPECT_NO_THROW(st.check_invariants(Family::NegBinomial));
}

TEST(Init, RejectsBoundaryAndTinyData) {
  CopulaSample bad = gumbel_data(10, 3);
  bad.rows[4].u = 0.0;
  EXPECT_THROW(Sampler(bad, config(Family::NegBinomial)), DataError);
  const Sampler one(gumbel_data(1, 3), config(Family::NegBinomial));
  EXPECT_THROW(static_cast<void>(one.init_state()), DataError);
}

TEST(Init, Deterministic) {
  const auto data = gumbel_data(30, 3);
  const Sampler sampler(data, config(Family::NegBinomial));
  const ChainState a = sampler.init_state(), b = sampler.init_state();
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.slices, b.slices);
  EXPECT_EQ(a.atoms, b.atoms);
}

TEST(Weights, FirstStickMomentWhenAllDataShareOneComponent) {
  constexpr std::size_t kN = 6;
  const auto data = gumbel_data(kN, 4);
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = sampler.init_state();
  std::vector<double> eta;
  for (int r = 0; r < 10000; ++r) {
    std::fill(st.allocations.begin(), st.allocations.end(), 0);
    sampler.update_weights_and_slices(st);
    eta.push_back(st.sticks[0]);
  }
  const double m = test::mean(eta);
  // Beta(n+1, M=1): mean (n+1)/(n+2), variance (n+1)/((n+2)^2 (n+3))
  const double expect = (kN + 1.0) / (kN + 2.0);
  const double se = std::sqrt((kN + 1.0) / ((kN + 2.0) * (kN + 2.0) * (kN + 3.0)) / eta.size());
  EXPECT_NEAR(m, expect, 3.0 * se);
}

TEST(Weights, ExtensionSticksFollowBetaOneM) {
  // With no data, every stick is a prior extension: η ~ Beta(1, M), mean 1/(1+M).
  SamplerConfig cfg = config(Family::NegBinomial);
  cfg.concentration = 3.0;
  const Sampler sampler(CopulaSample{}, cfg);
  ChainState st = sampler.prior_state(Rng(1));
  std::vector<double> first;
  for (int r = 0; r < 10000; ++r) {
    sampler.update_weights_and_slices(st);
    first.push_back(st.sticks[0]);
  }
  const double se = std::sqrt(3.0 / (16.0 * 5.0) / first.size());
  EXPECT_NEAR(test::mean(first), 0.25, 3.0 * se);
}

TEST(Weights, SliceSufficiencyAfterEveryUpdate) {
  const auto data = gumbel_data(80, 5);
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = sampler.init_state();
  for (int r = 0; r < 200; ++r) {
    sampler.sweep(st);
    const double min_slice = *std::min_element(st.slices.begin(), st.slices.end());
    double sum = 0.0;
    for (double w : st.weights) sum += w;
    ASSERT_GT(sum, 1.0 - min_slice);
    ASSERT_NO_THROW(st.check_invariants(Family::NegBinomial));
  }
}

TEST(Invariants, DetectCorruption) {
  const auto data = gumbel_data(20, 5);
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = sampler.init_state();
  ChainState broken = st;
  broken.weights[0] *= 0.5;
  EXPECT_THROW(broken.check_invariants(Family::NegBinomial), InvariantError);
  broken = st;
  broken.slices[0] = broken.weights[0] * 2.0;
  EXPECT_THROW(broken.check_invariants(Family::NegBinomial), InvariantError);
  broken = st;
  broken.allocations[0] = broken.weights.size();
  EXPECT_THROW(broken.check_invariants(Family::NegBinomial), InvariantError);
}

// ---------------------------------------------------------------------------
// atoms

TEST(Atoms, EmptyComponentsAreRedrawnFromBase) {
  const auto data = gumbel_data(20, 6);
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = sampler.init_state();
  // Force an unoccupied component.
  st.sticks.push_back(0.5);
  st.stick_complements.push_back(0.5);
  st.weights.push_back(st.remaining_mass * 0.5);
  st.remaining_mass *= 0.5;
  st.atoms.push_back({0.123, 0.456});
  std::vector<double> ys;
  for (int r = 0; r < 2000; ++r) {
    sampler.update_atoms(st);
    ys.push_back(st.atoms.back().y1);
  }
  EXPECT_LT(test::ks_uniform(ys), test::ks_critical_1pct(ys.size()));
}

TEST(Atoms, WithinCellMovesCarryOnlyTheLogitJacobian) {
  const auto data = gumbel_data(30, 7);
  auto cfg = config(Family::Binomial);
  cfg.theta_prior = ThetaPrior::uniform(4, 4 + 1);
  const Sampler sampler(data, cfg);
  ChainState st = sampler.init_state();
  st.theta = 4;
  st.atoms[0] = {0.30, 0.60};  // cells 2 and 3 of four
  const double y_new = 0.33;
  const double expect = std::log(y_new) + std::log1p(-y_new) - std::log(0.30) - std::log1p(-0.30);
  EXPECT_NEAR(sampler.atom_log_acceptance(st, 0, 0, y_new), expect, 1e-14);
}

TEST(Atoms, CrossCellRatioMatchesHandComputedLikelihood) {
  const auto data = gumbel_data(12, 8);
  auto cfg = config(Family::NegBinomial);
  const Sampler sampler(data, cfg);
  ChainState st = sampler.init_state();
  st.theta = 2.5;
  st.atoms[0] = {0.2, 0.7};
  const double y_new = 0.75;
  const auto spec = GeneratingSpec::make(Family::NegBinomial, 2.5);
  const double j_old = static_cast<double>(locate(spec, 0.2)), j_new = static_cast<double>(locate(spec, 0.75));
  double lik = 0.0;
  for (const auto& p : data.rows) lik += log_beta_pdf(p.u, j_new, 3.5) - log_beta_pdf(p.u, j_old, 3.5);
  const double jac = std::log(0.75 * 0.25) - std::log(0.2 * 0.8);
  EXPECT_NEAR(sampler.atom_log_acceptance(st, 0, 0, y_new), lik + jac, 1e-12 * std::max(1.0, std::abs(lik)));
}

TEST(Atoms, LongRunCellFrequenciesMatchEnumeration) {
  // One observation u = 0.9 under NegBinomial θ = 2: the atom's cell has mass ∝ α_j β(0.9 | j, 3).
  CopulaSample data{{{0.9, 0.5}, {0.9, 0.5}}};
  auto cfg = config(Family::NegBinomial);
  cfg.burn_in = 0;
  const Sampler sampler(data, cfg);
  ChainState st = sampler.init_state();
  st.theta = 2.0;
  const auto spec = GeneratingSpec::make(Family::NegBinomial, 2.0);
  std::vector<double> mass(201, 0.0);
  double total = 0.0;
  for (ComponentIndex j = 1; j <= 200; ++j) {
    // two identical observations in the component
    mass[j] = alpha(spec, j) * std::exp(2.0 * component_logdensity(spec, j, 0.9));
    total += mass[j];
  }
  std::map<ComponentIndex, double> freq;
  constexpr int kSweeps = 200000;
  st.allocations = {0, 0};
  for (int r = 0; r < kSweeps; ++r) {
    sampler.update_atoms(st);
    freq[locate(spec, st.atoms[0].y1)] += 1.0 / kSweeps;
  }
  for (ComponentIndex j = 1; j <= 40; ++j) {
    const double p = mass[j] / total;
    // loose bound: MH draws are autocorrelated
    EXPECT_NEAR(freq[j], p, 8.0 * std::sqrt(p * (1 - p) / kSweeps) * 4.0 + 1e-4) << "cell " << j;
  }
}

// ---------------------------------------------------------------------------
// allocations

TEST(Allocations, MatchBruteForceEnumeration) {
  const CopulaSample data{{{0.62, 0.71}, {0.2, 0.3}}};
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = test::three_component_state(sampler);
  st.check_invariants(Family::NegBinomial);
  const auto p = test::three_component_allocation_probs(st, 0.62, 0.71);
  std::vector<double> freq(3, 0.0);
  constexpr int kReps = 20000;
  for (int r = 0; r < kReps; ++r) {
    sampler.update_allocations(st);
    freq[st.allocations[0]] += 1.0 / kReps;
  }
  for (std::size_t s = 0; s < 3; ++s) {
    const double q = p[s];
    EXPECT_NEAR(freq[s], q, 4.0 * std::sqrt(q * (1 - q) / kReps) + 1e-9) << "component " << s;
  }
}

TEST(Allocations, SliceRestrictsSupport) {
  const CopulaSample data{{{0.62, 0.71}, {0.2, 0.3}}};
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = test::three_component_state(sampler);
  st.slices = {0.32, 0.25};  // only component 2 (weight .35) for observation 1
  for (int r = 0; r < 100; ++r) {
    sampler.update_allocations(st);
    ASSERT_EQ(st.allocations[0], 1u);
    ASSERT_NE(st.allocations[1], 2u);
  }
}

TEST(Allocations, SymmetricComponentsSplitEvenly) {
  const CopulaSample data{{{0.4, 0.45}, {0.5, 0.5}}};
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = test::three_component_state(sampler);
  st.weights = {0.4, 0.4, 0.1};
  st.sticks = {0.4, 0.4 / 0.6, 0.5};
  st.stick_complements = {0.6, 1.0 - 0.4 / 0.6, 0.5};
  st.remaining_mass = 0.6 * (1.0 - 0.4 / 0.6) * 0.5;
  st.atoms = {{0.3, 0.3}, {0.3, 0.3}, {0.9, 0.9}};
  st.slices = {0.2, 0.2};
  int first = 0;
  constexpr int kReps = 10000;
  for (int r = 0; r < kReps; ++r) {
    sampler.update_allocations(st);
    first += st.allocations[0] == 0;
  }
  EXPECT_NEAR(first / double(kReps), 0.5, 3.0 * std::sqrt(0.25 / kReps));
}

TEST(Allocations, EmptySupportIsAnInvariantError) {
  const CopulaSample data{{{0.62, 0.71}, {0.2, 0.3}}};
  const Sampler sampler(data, config(Family::NegBinomial));
  ChainState st = test::three_component_state(sampler);
  st.slices[0] = 0.5;
  EXPECT_THROW(sampler.update_allocations(st), InvariantError);
}

// ---------------------------------------------------------------------------
// θ

TEST(Theta, ZeroStepIsAccepted) {
  const auto data = gumbel_data(20, 9);
  const Sampler sampler(data, config(Family::NegBinomial));
  const ChainState st = sampler.init_state();
  EXPECT_EQ(sampler.theta_log_acceptance(st, st.theta), 0.0);
}

TEST(Theta, NegBinomialRatioMatchesHandComputation) {
  const auto data = gumbel_data(15, 10);
  auto cfg = config(Family::NegBinomial);
  cfg.theta_prior = ThetaPrior::gamma(2.0, 0.5);
  const Sampler sampler(data, cfg);
  ChainState st = sampler.init_state();
  st.theta = 3.0;
  st.atoms[0] = {0.4, 0.8};
  const double t_new = 4.2;
  auto loglik = [&](double t) {
    const auto spec = GeneratingSpec::make(Family::NegBinomial, t);
    double ll = 0.0;
    for (const auto& p : data.rows)
      ll += log_beta_pdf(p.u, static_cast<double>(locate(spec, 0.4)), t + 1) +
            log_beta_pdf(p.v, static_cast<double>(locate(spec, 0.8)), t + 1);
    return ll;
  };
  const double prior = (std::log(t_new) - 0.5 * t_new) - (std::log(3.0) - 0.5 * 3.0);
  const double expect = prior + loglik(t_new) - loglik(3.0) + std::log(t_new / 3.0);
  EXPECT_NEAR(sampler.theta_log_acceptance(st, t_new), expect, 1e-10 * std::max(1.0, std::abs(expect)));
  EXPECT_NEAR(sampler.log_likelihood(st, t_new) - sampler.log_likelihood(st, 3.0), loglik(t_new) - loglik(3.0), 1e-9);
}

TEST(Theta, BinomialRatioIntegratesAtomsOverCells) {
  const auto data = gumbel_data(8, 11);
  auto cfg = config(Family::Binomial);
  cfg.theta_prior = ThetaPrior::geometric(0.9);
  const Sampler sampler(data, cfg);
  ChainState st = sampler.init_state();
  st.theta = 3.0;
  // marginal over a uniform atom: (1/θ) Σ_j Π_i β(u_i | j, θ-j+1), per coordinate
  auto marginal = [&](double t) {
    double out = 0.0;
    for (int coord = 0; coord < 2; ++coord) {
      double z = 0.0;
      for (int j = 1; j <= static_cast<int>(t); ++j) {
        double l = 0.0;
        for (const auto& p : data.rows) l += log_beta_pdf(coord == 0 ? p.u : p.v, j, t - j + 1);
        z += std::exp(l) / t;
      }
      out += std::log(z);
    }
    return out;
  };
  const double expect = std::log(0.9) + marginal(4.0) - marginal(3.0);
  EXPECT_NEAR(sampler.theta_log_acceptance(st, 4.0), expect, 1e-10);
  EXPECT_EQ(sampler.theta_log_acceptance(st, 0.0), -std::numeric_limits<double>::infinity());
}

TEST(Theta, HeldDuringEarlyBurnIn) {
  const auto data = gumbel_data(40, 12);
  auto cfg = config(Family::NegBinomial);
  cfg.iterations = 60;
  cfg.burn_in = 50;
  cfg.theta_hold = 20;
  const Sampler sampler(data, cfg);
  ChainState st = sampler.init_state();
  const double theta0 = st.theta;
  for (int r = 0; r < 20; ++r) sampler.sweep(st);
  EXPECT_EQ(st.theta, theta0);
  EXPECT_EQ(st.theta_scale.proposed, 0);
  sampler.sweep(st);
  EXPECT_EQ(st.theta_scale.proposed, 1);
  cfg.theta_hold = -1;
  EXPECT_EQ(cfg.theta_hold_sweeps(), 5);
}

TEST(Theta, TailDependentDataPushesPosteriorAbovePriorMedian) {
  // Rotated NegBinC on Clayton(6) data versus on independent data, same prior.
  Rng rng(13);
  const auto clayton = sample(ParametricCopula::make(CopulaFamily::Clayton, 6.0), 300, rng);
  CopulaSample indep;
  for (int i = 0; i < 300; ++i) indep.rows.push_back({rng.uniform(), rng.uniform()});
  auto cfg = config(Family::NegBinomial, true);
  cfg.theta_prior = ThetaPrior::gamma(2.0, 1.0);
  cfg.iterations = 2000;
  cfg.burn_in = 1000;
  const double prior_median = boost::math::median(boost::math::gamma_distribution<>(2.0, 1.0));
  auto mass_above_median = [&](const CopulaSample& d) {
    double above = 0.0;
    const auto r = run_chain(d, cfg);
    for (const auto& draw : r.draws) above += draw.theta > prior_median;
    return above / static_cast<double>(r.draws.size());
  };
  EXPECT_GT(mass_above_median(clayton), 0.5);
  EXPECT_LT(mass_above_median(indep), 0.5);
}

// ---------------------------------------------------------------------------
// whole chains

TEST(Chain, PriorRecoveryWithoutData) {
  auto cfg = config(Family::NegBinomial);
  cfg.theta_prior = ThetaPrior::uniform(2.0, 10.0);
  cfg.iterations = 21000;
  cfg.burn_in = 1000;
  const auto result = run_chain(CopulaSample{}, cfg);
  std::vector<double> thetas;
  for (const auto& d : result.draws) thetas.push_back((d.theta - 2.0) / 8.0);
  std::sort(thetas.begin(), thetas.end());
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double emp = thetas[static_cast<std::size_t>(q * thetas.size())];
    EXPECT_NEAR(emp, q, 0.05) << "quantile " << q;
  }
}

TEST(Chain, PriorRecoveryWithoutDataBinomial) {
  auto cfg = config(Family::Binomial);
  cfg.theta_prior = ThetaPrior::uniform(1, 6);
  cfg.iterations = 21000;
  cfg.burn_in = 1000;
  const auto result = run_chain(CopulaSample{}, cfg);
  std::vector<double> counts(7, 0.0);
  for (const auto& d : result.draws) counts[static_cast<std::size_t>(d.theta)] += 1.0 / result.draws.size();
  for (int t = 1; t <= 6; ++t) EXPECT_NEAR(counts[t], 1.0 / 6.0, 0.03) << "theta " << t;
}

void expect_geweke_agreement(const SamplerConfig& cfg, double prior_theta_mean) {
  constexpr std::size_t kN = 3;
  const auto m = test::successive_conditional(cfg, kN, 100000);
  // CRP with M = 1 and three customers: E[K] = 1 + 1/2 + 1/3.
  const double expect_k = 11.0 / 6.0;
  EXPECT_NEAR(test::mean(m.occupied), expect_k, 4.0 * test::batch_means_se(m.occupied));
  EXPECT_NEAR(test::mean(m.theta), prior_theta_mean, 4.0 * test::batch_means_se(m.theta));
}

TEST(Geweke, NegBinomialJointMatchesPrior) {
  auto cfg = config(Family::NegBinomial);
  cfg.theta_prior = ThetaPrior::gamma(3.0, 1.0);
  cfg.seed = 21;
  expect_geweke_agreement(cfg, 3.0);
}

TEST(Geweke, RotatedNegBinomialJointMatchesPrior) {
  auto cfg = config(Family::NegBinomial, true);
  cfg.theta_prior = ThetaPrior::uniform(0.5, 6.0);
  cfg.seed = 22;
  expect_geweke_agreement(cfg, 3.25);
}

TEST(Geweke, BinomialJointMatchesPrior) {
  auto cfg = config(Family::Binomial);
  cfg.theta_prior = ThetaPrior::uniform(1, 6);
  cfg.seed = 23;
  expect_geweke_agreement(cfg, 3.5);
}

TEST(Chain, TinyConcentrationCollapsesToOneComponent) {
  const auto data = gumbel_data(100, 14);
  auto cfg = config(Family::NegBinomial);
  cfg.concentration = 1e-6;
  cfg.iterations = 1100;
  cfg.burn_in = 100;
  std::map<std::size_t, int> freq;
  run_chain(data, cfg, [&](std::int64_t it, const ChainState& st) {
    if (it >= 100) ++freq[st.occupied_count()];
  });
  const auto mode = std::max_element(freq.begin(), freq.end(), [](auto& a, auto& b) { return a.second < b.second; });
  EXPECT_EQ(mode->first, 1u);
}

TEST(Chain, DeterministicGivenSeed) {
  const auto data = gumbel_data(60, 15);
  auto cfg = config(Family::NegBinomial);
  cfg.seed = 77;
  const auto a = run_chain(data, cfg), b = run_chain(data, cfg);
  EXPECT_EQ(a.draws, b.draws);
  cfg.seed = 78;
  EXPECT_NE(run_chain(data, cfg).draws, a.draws);
}

TEST(Chain, InvariantsHoldEverySweep) {
  for (Family family : {Family::NegBinomial, Family::Binomial}) {
    const auto data = gumbel_data(60, 16);
    auto cfg = config(family);
    cfg.iterations = 300;
    cfg.burn_in = 100;
    EXPECT_NO_THROW(run_chain(data, cfg, [&](std::int64_t, const ChainState& st) { st.check_invariants(family); }));
  }
}

TEST(Chain, SnapshotsDropNegligibleWeights) {
  const auto data = gumbel_data(60, 17);
  const auto result = run_chain(data, config(Family::NegBinomial));
  for (const auto& d : result.draws) {
    EXPECT_EQ(d.weights.size(), d.atoms.size());
    double sum = 0.0;
    for (double w : d.weights) {
      EXPECT_GT(w, kEmissionFloor);
      sum += w;
    }
    EXPECT_LE(sum, 1.0 + 1e-12);
  }
  EXPECT_GT(result.diagnostics.atom_acceptance, 0.0);
  EXPECT_EQ(result.diagnostics.occupied_trace.size(), result.draws.size());
}

}  // namespace
}  // namespace rgpu
