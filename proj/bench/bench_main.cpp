// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "rcp/estimators/survival.hpp"
#include "rcp/graphical/sample.hpp"

using namespace rcp;

namespace {

const auto kLaw = InterarrivalLaw::pareto_tail(0.7, 1.0);

void BM_BuildSample(benchmark::State& st) {
  const auto box = SpaceTimeBox::cube(1, st.range(0), 0.0, 50.0);
  for (auto _ : st) benchmark::DoNotOptimize(build_sample(box, 1.0, kLaw, 42));
}

void BM_BuildSampleSerial(benchmark::State& st) {
  const auto box = SpaceTimeBox::cube(1, st.range(0), 0.0, 50.0);
  for (auto _ : st) benchmark::DoNotOptimize(build_sample_serial(box, 1.0, kLaw, 42));
}

MonteCarloConfig survival_config(long trials) {
  MonteCarloConfig c;
  c.law = kLaw;
  c.trials = static_cast<std::size_t>(trials);
  c.radius = 30;
  c.horizon = 20.0;
  c.lambdas = {0.5, 1.5, 3.0};
  return c;
}

void BM_EstimateSurvival(benchmark::State& st) {
  const auto c = survival_config(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(estimate_survival(c));
}

void BM_EstimateSurvivalSerial(benchmark::State& st) {
  const auto c = survival_config(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(estimate_survival_serial(c));
}

}  // namespace

BENCHMARK(BM_BuildSample)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildSampleSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateSurvival)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateSurvivalSerial)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
