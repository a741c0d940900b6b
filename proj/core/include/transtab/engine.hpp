#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transtab/manifest.hpp"
#include "transtab/measures.hpp"
#include "transtab/metrics.hpp"
#include "transtab/names.hpp"
#include "transtab/parallel.hpp"

namespace transtab {

enum class CellStatus : std::uint8_t {
  kAbsent,      // not a candidate pair (source == target)
  kOk,
  kDegenerate,  // the metric raised MetricError; see MetricCache::failures
};

// Metric values and accuracies for the full metric x target x source grid.
// Built once per scenario and read-only afterwards.
class MetricCache {
 public:
  MetricCache(std::vector<std::string> sources, std::vector<std::string> targets,
              std::vector<Metric> metrics);

  const std::vector<std::string>& sources() const { return sources_; }
  const std::vector<std::string>& targets() const { return targets_; }
  const std::vector<Metric>& metrics() const { return metrics_; }

  // Sources that may be pooled for a target (every source but the target).
  const std::vector<std::size_t>& candidates(std::size_t target) const { return candidates_[target]; }

  void set_metric(std::size_t metric, std::size_t target, std::size_t source, double value);
  void set_degenerate(std::size_t metric, std::size_t target, std::size_t source,
                      std::string reason);
  void set_accuracy(std::size_t target, std::size_t source, double accuracy);

  CellStatus status(std::size_t metric, std::size_t target, std::size_t source) const {
    return status_[index(metric, target, source)];
  }
  double metric_value(std::size_t metric, std::size_t target, std::size_t source) const {
    return values_[index(metric, target, source)];
  }
  double accuracy(std::size_t target, std::size_t source) const {
    return accuracies_[target * sources_.size() + source];
  }

  struct Failure {
    std::size_t metric, target, source;
    std::string reason;
  };
  std::vector<Failure> failures() const;

  // Number of metric computations performed while building the cache.
  std::uint64_t metric_evaluations = 0;

  // Undefined slots compare equal to each other.
  friend bool operator==(const MetricCache& a, const MetricCache& b);

 private:
  std::size_t index(std::size_t m, std::size_t t, std::size_t s) const {
    return (m * targets_.size() + t) * sources_.size() + s;
  }

  std::vector<std::string> sources_;
  std::vector<std::string> targets_;
  std::vector<Metric> metrics_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<double> values_;
  std::vector<CellStatus> status_;
  std::vector<double> accuracies_;
  std::map<std::size_t, std::string> failure_reasons_;
};

// Loads every (source, target) cell named by the manifest and computes each
// configured metric exactly once. Metric failures are recorded as degenerate
// cells; unreadable files or missing accuracies throw with the pair named.
// One cell's inputs, read (and balanced-subsampled when configured) exactly as
// build_cache sees them. Only files needed by manifest.metrics are read.
// Errors are rethrown with a "(source, target): " prefix.
struct PairData {
  FeatureMatrix features;
  PredictionMatrix predictions;
  LabelVector labels;
};
PairData load_pair(const ScenarioManifest& manifest, const PairPaths& paths);

MetricCache build_cache(const ScenarioManifest& manifest, std::size_t workers = default_workers());

// One setup XP(S, T, E). The pool is a bit mask over the cache's sources.
struct Experiment {
  std::uint64_t pool = 0;
  std::uint32_t target = 0;
  Measure measure = Measure::kKendall;

  std::vector<std::size_t> pool_members() const;
  friend bool operator==(const Experiment&, const Experiment&) = default;
};

// Per-metric quality, aligned with the cache's metric list; unset means the
// measure was undefined for that metric.
struct Outcome {
  std::vector<std::optional<double>> quality;
};

Outcome run_experiment(const Experiment& xp, const MetricCache& cache,
                       const MeasureOptions& options = {});

// Every experiment of a scenario with its outcome. Quality values are stored
// densely (experiment-major, NaN = undefined) to keep 10^6-scale sets compact.
struct ExperimentSet {
  std::string scenario;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  std::vector<Metric> metrics;
  std::vector<Measure> measures;
  std::vector<Experiment> experiments;
  std::vector<std::uint64_t> ids;
  std::vector<double> quality;

  std::size_t size() const { return experiments.size(); }
  std::span<const double> outcome(std::size_t i) const {
    return std::span<const double>(quality).subspan(i * metrics.size(), metrics.size());
  }
  std::map<std::string, std::size_t> count_by_target() const;
  std::map<std::string, std::size_t> count_by_measure() const;
  // Undefined quality entries per (metric, measure).
  std::map<std::pair<Metric, Measure>, std::size_t> undefined_counts() const;
};

// |targets| * C(candidates, k) * |measures|, summed per target when candidate
// counts differ.
std::uint64_t expected_experiment_count(const MetricCache& cache, std::size_t pool_size,
                                        std::size_t measure_count);

// Stable 64-bit id of (scenario, sorted pool ids, target id, measure).
std::uint64_t experiment_id(std::string_view scenario, std::span<const std::string> sorted_pool,
                            std::string_view target, Measure measure);

ExperimentSet run_scenario(const MetricCache& cache, std::string_view scenario,
                           std::size_t pool_size, std::span<const Measure> measures,
                           std::size_t workers = default_workers(),
                           const MeasureOptions& options = {});
ExperimentSet run_scenario(const ScenarioManifest& manifest,
                           std::size_t workers = default_workers());

// Enumerates the experiment list only (no outcomes); used to time enumeration.
std::vector<Experiment> enumerate_experiments(const MetricCache& cache, std::size_t pool_size,
                                              std::span<const Measure> measures);

// ---------------------------------------------------------------------------
// Export: CSV rows "experiment_id,target,measure,pool,metric,quality" (pool
// ids joined with ';', quality with 6 significant digits or "undefined") and
// a JSON summary.

void write_experiments_csv(const ExperimentSet& xs, std::ostream& out);
void write_experiments_csv(const ExperimentSet& xs, const std::filesystem::path& path);
ExperimentSet read_experiments_csv(const std::filesystem::path& path);
ExperimentSet read_experiments_csv(std::istream& in, std::string_view origin = "<stream>");

std::string scenario_summary_json(const ExperimentSet& xs, const MetricCache* cache,
                                  std::size_t pool_size);
void write_cache_csv(const MetricCache& cache, const std::filesystem::path& path);

}  // namespace transtab
