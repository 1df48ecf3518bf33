#include <benchmark/benchmark.h>

#include "rgpu/evaluation.hpp"
#include "rgpu/parametric.hpp"

namespace {

using namespace rgpu;

std::vector<PosteriorDraw> synthetic_draws(std::size_t count, std::size_t components) {
  Rng rng(4);
  std::vector<PosteriorDraw> draws(count);
  for (auto& d : draws) {
    d.theta = 2.0 + 20.0 * rng.uniform();
    double left = 1.0;
    for (std::size_t s = 0; s < components; ++s) {
      const double w = left * rng.beta(1.0, 1.0);
      d.weights.push_back(w);
      left -= w;
      d.atoms.push_back({rng.uniform(), rng.uniform()});
    }
  }
  return draws;
}

void BM_Lps(benchmark::State& state) {
  const auto draws = synthetic_draws(static_cast<std::size_t>(state.range(0)), 12);
  Rng rng(5);
  const auto test = sample(ParametricCopula::make(CopulaFamily::Gumbel, 2.5), 1000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lps(draws, {Family::NegBinomial, false}, test).total);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_Lps)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_KendallMergeSort(benchmark::State& state) {
  Rng rng(6);
  const auto data = sample(ParametricCopula::make(CopulaFamily::Clayton, 2.0), static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(data));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallMergeSort)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oNLogN);

void BM_KendallPairwise(benchmark::State& state) {
  Rng rng(6);
  const auto data = sample(ParametricCopula::make(CopulaFamily::Clayton, 2.0), static_cast<std::size_t>(state.range(0)), rng);
  std::vector<double> u, v;
  for (const auto& p : data.rows) {
    u.push_back(p.u);
    v.push_back(p.v);
  }
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau_pairwise(u, v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallPairwise)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity(benchmark::oNSquared);

void BM_PredictiveSample(benchmark::State& state) {
  const auto draws = synthetic_draws(1000, 12);
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(predictive_sample(draws, {Family::NegBinomial, false}, 1000, rng).size());
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_PredictiveSample)->Unit(benchmark::kMicrosecond);

}  // namespace
