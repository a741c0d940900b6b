#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "transtab/measures.hpp"

namespace {

using transtab::Measure;

void BM_Measure(benchmark::State& state, Measure measure) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = u(rng);
    a[i] = u(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(transtab::evaluate_measure(measure, m, a));
  }
  state.SetItemsProcessed(state.iterations());
}

BENCHMARK_CAPTURE(BM_Measure, pearson, Measure::kPearson)->Arg(11)->Arg(14)->Arg(100);
BENCHMARK_CAPTURE(BM_Measure, kendall, Measure::kKendall)->Arg(11)->Arg(14)->Arg(100);
BENCHMARK_CAPTURE(BM_Measure, weighted_kendall, Measure::kWeightedKendall)
    ->Arg(11)
    ->Arg(14)
    ->Arg(100);
BENCHMARK_CAPTURE(BM_Measure, rel_at_1, Measure::kRelAt1)->Arg(11)->Arg(14)->Arg(100);

void BM_KendallTauAgreement(benchmark::State& state) {
  const std::vector<double> x{0.3, 0.1, 0.9, 0.5, 0.7}, y{0.2, 0.4, 0.8, 0.1, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(transtab::kendall_tau(x, y));
}
BENCHMARK(BM_KendallTauAgreement);

}  // namespace
