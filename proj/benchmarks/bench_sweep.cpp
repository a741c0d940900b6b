#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <vector>

#include "transtab/engine.hpp"
#include "transtab/stability.hpp"

namespace {

using namespace transtab;

// Cache over `sources` ids whose first `targets` entries are also targets,
// filled with seeded values.
MetricCache filled_cache(std::size_t sources, std::size_t targets) {
  std::vector<std::string> src;
  for (std::size_t i = 0; i < sources; ++i) src.push_back("ds" + std::to_string(100 + i));
  std::vector<std::string> tgt(src.begin(), src.begin() + static_cast<long>(targets));
  MetricCache cache(src, tgt, std::vector<Metric>(kDefaultMetrics.begin(), kDefaultMetrics.end()));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t t = 0; t < targets; ++t) {
    for (auto s : cache.candidates(t)) {
      cache.set_accuracy(t, s, u(rng));
      for (std::size_t m = 0; m < cache.metrics().size(); ++m) cache.set_metric(m, t, s, u(rng));
    }
  }
  return cache;
}

const std::vector<Measure> kMeasures(kAllMeasures.begin(), kAllMeasures.end());

// Scenario-1 shape: 17 datasets, pools of 11 out of 16 candidates.
void BM_Enumerate(benchmark::State& state) {
  const MetricCache cache = filled_cache(17, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_experiments(cache, 11, kMeasures).size());
  }
  state.SetItemsProcessed(state.iterations() * 297024);
}
BENCHMARK(BM_Enumerate)->Unit(benchmark::kMillisecond);

void BM_RunScenario(benchmark::State& state) {
  const MetricCache cache = filled_cache(17, 17);
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cache, "bench", 11, kMeasures, workers).size());
  }
  state.SetItemsProcessed(state.iterations() * 297024);
}
BENCHMARK(BM_RunScenario)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExportCsv(benchmark::State& state) {
  const MetricCache cache = filled_cache(12, 12);
  const ExperimentSet xs = run_scenario(cache, "bench", 6, kMeasures, 1);
  for (auto _ : state) {
    std::ostringstream out;
    write_experiments_csv(xs, out);
    benchmark::DoNotOptimize(out.str().size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_ExportCsv)->Unit(benchmark::kMillisecond);

void BM_SetupStability(benchmark::State& state, Component component, PairMode mode) {
  const MetricCache cache = filled_cache(12, 12);
  const ExperimentSet xs = run_scenario(cache, "bench", 6, kMeasures, 1);
  const EdgeOptions options{mode, 100000, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(setup_stability(xs, component, options, 1).ss);
  }
}
BENCHMARK_CAPTURE(BM_SetupStability, target_exact, Component::kTarget, PairMode::kExact)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SetupStability, source_pool_sampled, Component::kSourcePool,
                  PairMode::kSampled)
    ->Unit(benchmark::kMillisecond);

}  // namespace
