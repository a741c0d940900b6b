#include "transtab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "transtab/combinations.hpp"
#include "transtab/errors.hpp"
#include "transtab/io.hpp"

namespace transtab {
namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

struct CellResult {
  std::vector<double> values;
  std::vector<std::string> errors;  // empty string = ok
};

}  // namespace

MetricCache::MetricCache(std::vector<std::string> sources, std::vector<std::string> targets,
                         std::vector<Metric> metrics)
    : sources_(std::move(sources)), targets_(std::move(targets)), metrics_(std::move(metrics)) {
  if (sources_.size() > kMaxSources) {
    throw ValidationError("at most " + std::to_string(kMaxSources) + " sources are supported");
  }
  candidates_.resize(targets_.size());
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      if (sources_[s] != targets_[t]) candidates_[t].push_back(s);
    }
  }
  const std::size_t cells = targets_.size() * sources_.size();
  values_.assign(metrics_.size() * cells, kUndefined);
  status_.assign(metrics_.size() * cells, CellStatus::kAbsent);
  accuracies_.assign(cells, kUndefined);
}

namespace {

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](double x, double y) {
    return x == y || (std::isnan(x) && std::isnan(y));
  });
}

}  // namespace

bool operator==(const MetricCache& a, const MetricCache& b) {
  return a.sources_ == b.sources_ && a.targets_ == b.targets_ && a.metrics_ == b.metrics_ &&
         a.status_ == b.status_ && same_values(a.values_, b.values_) &&
         same_values(a.accuracies_, b.accuracies_) &&
         a.failure_reasons_ == b.failure_reasons_ &&
         a.metric_evaluations == b.metric_evaluations;
}

void MetricCache::set_metric(std::size_t metric, std::size_t target, std::size_t source,
                             double value) {
  const auto i = index(metric, target, source);
  values_[i] = value;
  status_[i] = CellStatus::kOk;
  failure_reasons_.erase(i);
}

void MetricCache::set_degenerate(std::size_t metric, std::size_t target, std::size_t source,
                                 std::string reason) {
  const auto i = index(metric, target, source);
  values_[i] = kUndefined;
  status_[i] = CellStatus::kDegenerate;
  failure_reasons_[i] = std::move(reason);
}

void MetricCache::set_accuracy(std::size_t target, std::size_t source, double accuracy) {
  accuracies_[target * sources_.size() + source] = accuracy;
}

std::vector<MetricCache::Failure> MetricCache::failures() const {
  std::vector<Failure> out;
  const std::size_t cells = targets_.size() * sources_.size();
  for (const auto& [i, reason] : failure_reasons_) {
    out.push_back({i / cells, (i % cells) / sources_.size(), i % sources_.size(), reason});
  }
  return out;
}

PairData load_pair(const ScenarioManifest& manifest, const PairPaths& paths) {
  const bool want_features =
      std::any_of(manifest.metrics.begin(), manifest.metrics.end(), needs_features);
  const bool want_predictions =
      std::any_of(manifest.metrics.begin(), manifest.metrics.end(), needs_predictions);
  const std::string where = "(" + paths.source + ", " + paths.target + "): ";

  PairData d;
  try {
    d.labels = read_labels(paths.labels);
    if (want_features) d.features = read_features(paths.features);
    if (want_predictions) d.predictions = read_predictions(paths.predictions);
  } catch (const IoError& e) {
    throw IoError(where + e.what());
  } catch (const FormatError& e) {
    throw FormatError(where + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(where + e.what());
  }
  if (want_features && d.features.rows() != d.labels.size()) {
    throw ValidationError(where + "features have " + std::to_string(d.features.rows()) +
                          " rows but labels have " + std::to_string(d.labels.size()));
  }
  if (want_predictions && d.predictions.rows() != d.labels.size()) {
    throw ValidationError(where + "predictions have " + std::to_string(d.predictions.rows()) +
                          " rows but labels have " + std::to_string(d.labels.size()));
  }
  if (manifest.subsample) {
    const auto idx = balanced_subsample_indices(d.labels, manifest.subsample->samples,
                                                manifest.subsample->seed);
    if (idx.size() < d.labels.size()) {
      if (want_features) d.features = d.features.select_rows(idx);
      if (want_predictions) d.predictions = d.predictions.select_rows(idx);
      d.labels = d.labels.select(idx);
    }
  }
  return d;
}

MetricCache build_cache(const ScenarioManifest& manifest, std::size_t workers) {
  MetricCache cache(manifest.sources, manifest.targets, manifest.metrics);
  const TransferTable table = read_transfer_table(manifest.accuracies);

  struct Cell {
    std::size_t target, source;
  };
  std::vector<Cell> cells;
  for (std::size_t t = 0; t < manifest.targets.size(); ++t) {
    for (auto s : cache.candidates(t)) {
      const auto acc = table.find(manifest.sources[s], manifest.targets[t]);
      if (!acc) {
        throw ValidationError(manifest.accuracies.string() + ": no accuracy for (" +
                              manifest.sources[s] + ", " + manifest.targets[t] + ")");
      }
      cache.set_accuracy(t, s, *acc);
      cells.push_back({t, s});
    }
  }

  const bool want_features =
      std::any_of(manifest.metrics.begin(), manifest.metrics.end(), needs_features);
  const bool want_predictions =
      std::any_of(manifest.metrics.begin(), manifest.metrics.end(), needs_predictions);
  MetricOptions options;
  options.nleep = manifest.nleep;
  options.gbc_covariance = manifest.gbc_covariance;

  std::atomic<std::uint64_t> evaluations{0};
  std::vector<CellResult> results(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t c) {
    const auto& source = manifest.sources[cells[c].source];
    const auto& target = manifest.targets[cells[c].target];
    const PairPaths* paths = manifest.find_pair(source, target);

    const PairData data = load_pair(manifest, *paths);
    MetricInputs inputs{want_features ? &data.features : nullptr,
                        want_predictions ? &data.predictions : nullptr, &data.labels};
    CellResult& out = results[c];
    for (Metric metric : manifest.metrics) {
      evaluations.fetch_add(1, std::memory_order_relaxed);
      try {
        const MetricScore score = compute_metric(metric, inputs, options);
        out.values.push_back(score.value);
        out.errors.emplace_back();
      } catch (const MetricError& e) {
        out.values.push_back(kUndefined);
        out.errors.emplace_back(e.what());
      }
    }
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t m = 0; m < manifest.metrics.size(); ++m) {
      if (results[c].errors[m].empty()) {
        cache.set_metric(m, cells[c].target, cells[c].source, results[c].values[m]);
      } else {
        cache.set_degenerate(m, cells[c].target, cells[c].source, results[c].errors[m]);
      }
    }
  }
  cache.metric_evaluations = evaluations.load();
  return cache;
}

std::vector<std::size_t> Experiment::pool_members() const {
  std::vector<std::size_t> out;
  for (std::uint64_t m = pool; m != 0; m &= m - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return out;
}

namespace {

// Quality of every metric for one (target, pool) under each measure.
// `quality` receives measures.size() rows of metrics.size() values.
void evaluate_pool(const MetricCache& cache, std::size_t target,
                   std::span<const std::size_t> members, std::span<const Measure> measures,
                   const MeasureOptions& options, std::span<double> quality) {
  const std::size_t k = members.size();
  const std::size_t n_metrics = cache.metrics().size();
  std::vector<double> acc(k);
  std::vector<double> vals(k);
  for (std::size_t i = 0; i < k; ++i) acc[i] = cache.accuracy(target, members[i]);
  for (std::size_t m = 0; m < n_metrics; ++m) {
    bool usable = true;
    for (std::size_t i = 0; i < k; ++i) {
      if (cache.status(m, target, members[i]) != CellStatus::kOk) {
        usable = false;
        break;
      }
      vals[i] = cache.metric_value(m, target, members[i]);
    }
    for (std::size_t e = 0; e < measures.size(); ++e) {
      double q = kUndefined;
      if (usable) {
        if (auto v = evaluate_measure(measures[e], vals, acc, options)) q = *v;
      }
      quality[e * n_metrics + m] = q;
    }
  }
}

}  // namespace

Outcome run_experiment(const Experiment& xp, const MetricCache& cache,
                       const MeasureOptions& options) {
  const auto members = xp.pool_members();
  std::vector<double> q(cache.metrics().size());
  const Measure measure[] = {xp.measure};
  evaluate_pool(cache, xp.target, members, measure, options, q);
  Outcome out;
  for (double v : q) out.quality.push_back(std::isnan(v) ? std::nullopt : std::optional<double>(v));
  return out;
}

std::uint64_t expected_experiment_count(const MetricCache& cache, std::size_t pool_size,
                                        std::size_t measure_count) {
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < cache.targets().size(); ++t) {
    total += binomial(cache.candidates(t).size(), pool_size) * measure_count;
  }
  return total;
}

std::uint64_t experiment_id(std::string_view scenario, std::span<const std::string> sorted_pool,
                            std::string_view target, Measure measure) {
  // FNV-1a over the fields separated by unit/record separators.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  mix(scenario);
  mix("\x1f");
  mix(target);
  mix("\x1f");
  mix(to_string(measure));
  for (const auto& id : sorted_pool) {
    mix("\x1e");
    mix(id);
  }
  return h;
}

std::vector<Experiment> enumerate_experiments(const MetricCache& cache, std::size_t pool_size,
                                              std::span<const Measure> measures) {
  std::vector<Experiment> out;
  out.reserve(expected_experiment_count(cache, pool_size, measures.size()));
  for (std::size_t t = 0; t < cache.targets().size(); ++t) {
    const auto& cand = cache.candidates(t);
    if (pool_size < 1 || pool_size > cand.size()) {
      throw ValidationError("pool size " + std::to_string(pool_size) + " exceeds the " +
                            std::to_string(cand.size()) + " candidates of target '" +
                            cache.targets()[t] + "'");
    }
    std::vector<std::size_t> combo(pool_size);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    do {
      std::uint64_t mask = 0;
      for (auto c : combo) mask |= std::uint64_t{1} << cand[c];
      for (Measure e : measures) out.push_back({mask, static_cast<std::uint32_t>(t), e});
    } while (next_combination(combo, cand.size()));
  }
  return out;
}

ExperimentSet run_scenario(const MetricCache& cache, std::string_view scenario,
                           std::size_t pool_size, std::span<const Measure> measures,
                           std::size_t workers, const MeasureOptions& options) {
  ExperimentSet xs;
  xs.scenario = std::string(scenario);
  xs.sources = cache.sources();
  xs.targets = cache.targets();
  xs.metrics = cache.metrics();
  xs.measures.assign(measures.begin(), measures.end());
  xs.experiments = enumerate_experiments(cache, pool_size, measures);

  const std::size_t n_measures = measures.size();
  const std::size_t n_metrics = xs.metrics.size();
  const std::size_t blocks = n_measures == 0 ? 0 : xs.experiments.size() / n_measures;
  xs.quality.assign(xs.experiments.size() * n_metrics, kUndefined);
  xs.ids.assign(xs.experiments.size(), 0);

  // Blocks of |measures| consecutive experiments share (target, pool); chunk
  // them so each task amortises the dispatch overhead.
  constexpr std::size_t kBlocksPerTask = 256;
  const std::size_t tasks = (blocks + kBlocksPerTask - 1) / kBlocksPerTask;
  parallel_for(tasks, workers, [&](std::size_t task) {
    std::vector<std::string> pool_ids;
    const std::size_t end = std::min(blocks, (task + 1) * kBlocksPerTask);
    for (std::size_t b = task * kBlocksPerTask; b < end; ++b) {
      const std::size_t first = b * n_measures;
      const Experiment& head = xs.experiments[first];
      const auto members = head.pool_members();
      evaluate_pool(cache, head.target, members, measures, options,
                    std::span<double>(xs.quality).subspan(first * n_metrics, n_measures * n_metrics));
      pool_ids.clear();
      for (auto s : members) pool_ids.push_back(cache.sources()[s]);
      for (std::size_t e = 0; e < n_measures; ++e) {
        xs.ids[first + e] =
            experiment_id(scenario, pool_ids, cache.targets()[head.target], measures[e]);
      }
    }
  });
  return xs;
}

ExperimentSet run_scenario(const ScenarioManifest& manifest, std::size_t workers) {
  const MetricCache cache = build_cache(manifest, workers);
  return run_scenario(cache, manifest.name, manifest.pool_size, manifest.measures, workers);
}

std::map<std::string, std::size_t> ExperimentSet::count_by_target() const {
  std::map<std::string, std::size_t> out;
  for (const auto& xp : experiments) ++out[targets[xp.target]];
  return out;
}

std::map<std::string, std::size_t> ExperimentSet::count_by_measure() const {
  std::map<std::string, std::size_t> out;
  for (const auto& xp : experiments) ++out[std::string(to_string(xp.measure))];
  return out;
}

std::map<std::pair<Metric, Measure>, std::size_t> ExperimentSet::undefined_counts() const {
  std::map<std::pair<Metric, Measure>, std::size_t> out;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    const auto q = outcome(i);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      if (std::isnan(q[m])) ++out[{metrics[m], experiments[i].measure}];
    }
  }
  return out;
}

}  // namespace transtab
