#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "transtab/errors.hpp"
#include "transtab/scenario_gen.hpp"

namespace transtab {

TargetPoolSpec TargetPoolSpec::uniform(std::uint64_t seed, double lo, double hi) {
  TargetPoolSpec s;
  s.strategy = PoolStrategy::kUniformFraction;
  s.min_fraction = lo;
  s.max_fraction = hi;
  s.seed = seed;
  return s;
}

TargetPoolSpec TargetPoolSpec::fixed(std::uint64_t seed, double fraction) {
  TargetPoolSpec s;
  s.strategy = PoolStrategy::kFixedFraction;
  s.fraction = fraction;
  s.seed = seed;
  return s;
}

std::vector<ClassSubset> sample_target_pool(const TargetPoolSpec& spec, const LabelVector& labels) {
  const auto freq = labels.class_frequencies();
  std::vector<std::int32_t> classes;
  for (std::size_t c = 0; c < freq.size(); ++c) {
    if (freq[c] > 0) classes.push_back(static_cast<std::int32_t>(c));
  }
  const std::size_t n_classes = classes.size();
  if (n_classes < 2) throw ValidationError("target pool: need at least two classes");
  if (spec.pool_size < 2) throw ValidationError("target pool: pool_size must be at least 2");

  std::size_t lo = 0, hi = 0;
  if (spec.strategy == PoolStrategy::kFixedFraction) {
    if (!(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
      throw ValidationError("target pool: fraction must lie in (0, 1]");
    }
    lo = hi = static_cast<std::size_t>(std::lround(spec.fraction * static_cast<double>(n_classes)));
  } else {
    if (!(spec.min_fraction > 0.0 && spec.min_fraction <= spec.max_fraction &&
          spec.max_fraction <= 1.0)) {
      throw ValidationError("target pool: need 0 < min_fraction <= max_fraction <= 1");
    }
    lo = static_cast<std::size_t>(std::lround(spec.min_fraction * static_cast<double>(n_classes)));
    hi = static_cast<std::size_t>(std::lround(spec.max_fraction * static_cast<double>(n_classes)));
    lo = std::max<std::size_t>(lo, 1);
  }
  if (hi == 0) throw ValidationError("target pool: requested subset size is 0");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> size_dist(lo, hi);
  std::vector<ClassSubset> pool;
  pool.reserve(spec.pool_size);
  std::vector<std::int32_t> scratch = classes;
  for (std::size_t p = 0; p < spec.pool_size; ++p) {
    const std::size_t size = size_dist(rng);
    // Partial Fisher-Yates: the first `size` entries form a uniform subset.
    for (std::size_t i = 0; i < size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n_classes - 1);
      std::swap(scratch[i], scratch[pick(rng)]);
    }
    ClassSubset subset(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(subset.begin(), subset.end());
    pool.push_back(std::move(subset));
  }
  return pool;
}

TargetSelectionData extract_subset(const TargetSelectionData& data, const ClassSubset& subset) {
  std::vector<std::int32_t> remap(static_cast<std::size_t>(data.labels.class_count()), -1);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= data.labels.class_count()) {
      throw ValidationError("class subset refers to unknown class " + std::to_string(subset[i]));
    }
    remap[subset[i]] = static_cast<std::int32_t>(i);
  }
  std::vector<std::size_t> rows;
  std::vector<std::int32_t> ids;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    const auto r = remap[data.labels[i]];
    if (r >= 0) {
      rows.push_back(i);
      ids.push_back(r);
    }
  }
  if (rows.empty()) throw ValidationError("class subset selects no samples");
  TargetSelectionData out;
  if (data.features.rows() > 0) out.features = data.features.select_rows(rows);
  if (data.predictions) out.predictions = data.predictions->select_rows(rows);
  out.labels = LabelVector(std::move(ids), static_cast<std::int32_t>(subset.size()));
  return out;
}

TargetSelectionResult run_target_selection(std::span<const ClassSubset> pool,
                                           const TargetSelectionData& data,
                                           std::span<const double> accuracies,
                                           std::span<const Metric> metrics, Measure measure,
                                           const MetricOptions& metric_options,
                                           const MeasureOptions& measure_options,
                                           std::size_t workers) {
  if (accuracies.size() != pool.size()) {
    throw ValidationError("target selection: " + std::to_string(accuracies.size()) +
                          " accuracies for " + std::to_string(pool.size()) + " subsets");
  }
  TargetSelectionResult result;
  result.metrics.assign(metrics.begin(), metrics.end());
  result.measure = measure;
  const double nan = std::nan("");
  result.metric_values.assign(metrics.size(), std::vector<double>(pool.size(), nan));
  std::vector<std::vector<std::string>> errors(pool.size(),
                                               std::vector<std::string>(metrics.size()));

  parallel_for(pool.size(), workers, [&](std::size_t p) {
    const TargetSelectionData subset = extract_subset(data, pool[p]);
    const MetricInputs inputs{&subset.features,
                              subset.predictions ? &*subset.predictions : nullptr, &subset.labels};
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      try {
        result.metric_values[m][p] = compute_metric(metrics[m], inputs, metric_options).value;
      } catch (const MetricError& e) {
        errors[p][m] = "subset " + std::to_string(p) + ": " + e.what();
      }
    }
  });

  result.failures.resize(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    std::vector<double> mv, av;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (!errors[p][m].empty()) {
        result.failures[m].push_back(errors[p][m]);
        continue;
      }
      mv.push_back(result.metric_values[m][p]);
      av.push_back(accuracies[p]);
    }
    result.quality.push_back({measure, evaluate_measure(measure, mv, av, measure_options)});
  }
  return result;
}

std::vector<double> class_count_accuracies(std::span<const ClassSubset> pool,
                                           std::size_t class_count, double noise,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out;
  out.reserve(pool.size());
  for (const auto& subset : pool) {
    const double base =
        0.2 + 0.7 * static_cast<double>(subset.size()) / static_cast<double>(class_count);
    const double eps = noise > 0.0 ? noise * gauss(rng) : 0.0;
    out.push_back(std::clamp(base + eps, 0.0, 1.0));
  }
  return out;
}

}  // namespace transtab
