#include <benchmark/benchmark.h>

#include "rgpu/parametric.hpp"
#include "rgpu/sampler.hpp"

namespace {

using namespace rgpu;

/// One full sweep on n Gumbel(2.5) points after a short warm-up.
void BM_Sweep(benchmark::State& state) {
  const ModelSpec model{static_cast<Family>(state.range(0)), false};
  Rng rng(3);
  const auto data = sample(ParametricCopula::make(CopulaFamily::Gumbel, 2.5), static_cast<std::size_t>(state.range(1)), rng);
  SamplerConfig cfg = SamplerConfig::defaults_for(model);
  cfg.iterations = 2000;
  cfg.burn_in = 1000;
  const Sampler sampler(data, cfg);
  ChainState st = sampler.init_state();
  for (int i = 0; i < 200; ++i) sampler.sweep(st);
  for (auto _ : state) sampler.sweep(st);
  state.counters["occupied"] = static_cast<double>(st.occupied_count());
  state.counters["theta"] = st.theta;
}
BENCHMARK(BM_Sweep)->Args({1, 1000})->Args({0, 1000})->Args({1, 3000})->Unit(benchmark::kMicrosecond);

}  // namespace
