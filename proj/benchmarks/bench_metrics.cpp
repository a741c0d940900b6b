#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "transtab/metrics.hpp"

namespace {

using namespace transtab;

struct Inputs {
  FeatureMatrix features;
  PredictionMatrix predictions;
  LabelVector labels;
};

// n samples in `classes` Gaussian clusters in d dimensions, with softmax
// predictions over the same number of source classes.
Inputs make_inputs(std::size_t n, std::size_t d, std::int32_t classes) {
  std::mt19937_64 rng(7);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<std::int32_t> y(n);
  std::vector<float> f(n * d), p(n * static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<std::int32_t>(i % static_cast<std::size_t>(classes));
    for (std::size_t j = 0; j < d; ++j) {
      f[i * d + j] = g(rng) + (j == static_cast<std::size_t>(y[i]) % d ? 2.0f : 0.0f);
    }
    float sum = 0.0f;
    for (std::int32_t k = 0; k < classes; ++k) {
      const float v = std::exp(g(rng) + (k == y[i] ? 1.5f : 0.0f));
      p[i * static_cast<std::size_t>(classes) + static_cast<std::size_t>(k)] = v;
      sum += v;
    }
    for (std::int32_t k = 0; k < classes; ++k) {
      p[i * static_cast<std::size_t>(classes) + static_cast<std::size_t>(k)] /= sum;
    }
  }
  return {FeatureMatrix(Matrix(n, d, std::move(f))),
          PredictionMatrix(Matrix(n, static_cast<std::size_t>(classes), std::move(p))),
          LabelVector(std::move(y))};
}

void BM_Metric(benchmark::State& state, Metric metric) {
  const Inputs in = make_inputs(static_cast<std::size_t>(state.range(0)), 32, 10);
  const MetricInputs inputs{&in.features, &in.predictions, &in.labels};
  for (auto _ : state) benchmark::DoNotOptimize(compute_metric(metric, inputs).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(BM_Metric, leep, Metric::kLeep)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, nleep, Metric::kNleep)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, logme, Metric::kLogMe)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, gbc, Metric::kGbc)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, hscore, Metric::kHScore)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
