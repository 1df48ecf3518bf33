#include <benchmark/benchmark.h>

#include <vector>

#include "rgpu/partition.hpp"
#include "rgpu/rng.hpp"

namespace {

using namespace rgpu;

std::vector<double> uniforms(std::size_t n) {
  Rng rng(1);
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.uniform();
  return xs;
}

void BM_Locate(benchmark::State& state) {
  const auto family = static_cast<Family>(state.range(0));
  const auto spec = GeneratingSpec::make(family, static_cast<double>(state.range(1)));
  const auto ys = uniforms(4096);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(locate(spec, ys[k++ & 4095]));
}
BENCHMARK(BM_Locate)->Args({0, 3})->Args({0, 50})->Args({1, 5})->Args({1, 200});

void BM_ComponentLogDensity(benchmark::State& state) {
  const auto spec = GeneratingSpec::make(Family::NegBinomial, 7.5);
  const auto us = uniforms(4096);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(component_logdensity(spec, 1 + static_cast<ComponentIndex>(k % 40), us[k & 4095]));
    ++k;
  }
}
BENCHMARK(BM_ComponentLogDensity);

void BM_MixtureDensity(benchmark::State& state) {
  Rng rng(2);
  PosteriorDraw d;
  d.theta = 12.0;
  double left = 1.0;
  for (int s = 0; s < state.range(0); ++s) {
    const double w = left * 0.5;
    d.weights.push_back(w);
    left -= w;
    d.atoms.push_back({rng.uniform(), rng.uniform()});
  }
  const DrawDensity dens(d, {Family::NegBinomial, false});
  const auto us = uniforms(4096);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dens.log_density(us[k & 4095], us[(k + 1) & 4095]));
    ++k;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MixtureDensity)->Arg(4)->Arg(16)->Arg(64);

}  // namespace
