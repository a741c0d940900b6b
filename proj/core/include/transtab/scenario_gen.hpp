#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transtab/manifest.hpp"
#include "transtab/measures.hpp"
#include "transtab/metrics.hpp"
#include "transtab/parallel.hpp"

namespace transtab {

// ---------------------------------------------------------------------------
// Target-pool construction by class subsampling (one source, many targets).

enum class PoolStrategy {
  kUniformFraction,  // subset size uniform between min and max fraction of C
  kFixedFraction,    // every subset holds round(fraction * C) classes
};

struct TargetPoolSpec {
  PoolStrategy strategy = PoolStrategy::kUniformFraction;
  double min_fraction = 0.02;
  double max_fraction = 1.0;
  double fraction = 0.5;
  std::size_t pool_size = 100;
  std::uint64_t seed = 0;

  static TargetPoolSpec uniform(std::uint64_t seed, double lo = 0.02, double hi = 1.0);
  static TargetPoolSpec fixed(std::uint64_t seed, double fraction = 0.5);
};

using ClassSubset = std::vector<std::int32_t>;

// Draws pool_size subsets of the classes present in `labels`. Classes are
// unique within a subset; two subsets may coincide. Throws ValidationError
// on fewer than two classes or a zero subset size.
std::vector<ClassSubset> sample_target_pool(const TargetPoolSpec& spec, const LabelVector& labels);

// The full target dataset as seen through one fixed source model.
struct TargetSelectionData {
  FeatureMatrix features;
  std::optional<PredictionMatrix> predictions;
  LabelVector labels;
};

// Rows whose class is in `subset`, relabelled 0..|subset|-1 in subset order.
TargetSelectionData extract_subset(const TargetSelectionData& data, const ClassSubset& subset);

struct TargetSelectionResult {
  std::vector<Metric> metrics;
  Measure measure = Measure::kWeightedKendall;
  // [metric][subset]; NaN where the metric failed on that subset.
  std::vector<std::vector<double>> metric_values;
  std::vector<std::vector<std::string>> failures;  // [metric] -> messages
  std::vector<MeasureValue> quality;                // per metric
};

// Scores every subset with every metric and evaluates `measure` against the
// per-subset accuracies. Failed subsets are dropped from that metric's series.
TargetSelectionResult run_target_selection(std::span<const ClassSubset> pool,
                                           const TargetSelectionData& data,
                                           std::span<const double> accuracies,
                                           std::span<const Metric> metrics, Measure measure,
                                           const MetricOptions& metric_options = {},
                                           const MeasureOptions& measure_options = {},
                                           std::size_t workers = default_workers());

// Synthetic accuracies increasing in subset size: 0.2 + 0.7 |S| / C plus
// seeded Gaussian noise, clipped to [0, 1].
std::vector<double> class_count_accuracies(std::span<const ClassSubset> pool,
                                           std::size_t class_count, double noise,
                                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic scenarios with a planted transfer quality per (source, target).

enum class AccuracyLink { kTanh, kLinear };

struct SyntheticSpec {
  std::string scenario = "synthetic";
  std::size_t sources = 6;
  std::size_t targets = 4;
  // When false the targets are the first `targets` sources (a dataset never
  // transfers to itself); when true they are separate ids.
  bool disjoint_targets = false;
  std::size_t pool_size = 3;
  std::size_t feature_dim = 8;
  std::size_t classes = 4;
  std::size_t samples_per_class = 50;
  std::size_t source_classes = 0;  // 0 means `classes`
  double separation_min = 0.5;
  double separation_max = 3.0;
  double noise = 0.0;  // std-dev of Gaussian noise added to accuracies
  AccuracyLink link = AccuracyLink::kTanh;
  std::uint64_t seed = 0;
  std::vector<Metric> metrics{kDefaultMetrics.begin(), kDefaultMetrics.end()};
  std::vector<Measure> measures{kAllMeasures.begin(), kAllMeasures.end()};
};

// Throws ValidationError naming the offending field.
void validate(const SyntheticSpec& spec);
SyntheticSpec parse_synthetic_spec(std::string_view json_text);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

std::vector<std::string> synthetic_source_ids(const SyntheticSpec& spec);
std::vector<std::string> synthetic_target_ids(const SyntheticSpec& spec);

// Planted separation of (source, target); within a target the candidate
// sources get evenly spaced values in a seeded order.
double synthetic_separation(const SyntheticSpec& spec, std::size_t target, std::size_t source);
double synthetic_accuracy(const SyntheticSpec& spec, std::size_t target, std::size_t source);

struct SyntheticCell {
  FeatureMatrix features;
  PredictionMatrix predictions;
  LabelVector labels;
  double separation = 0.0;
  double accuracy = 0.0;
};

// Features are sep * U[y] + Z with U unit class directions and Z standard
// normal noise, both shared by every source of a target. Predictions are a
// softmax over negative half squared distances to sep-scaled anchors.
SyntheticCell synthesize_cell(const SyntheticSpec& spec, std::size_t target, std::size_t source);

// Writes data files, accuracies.csv and manifest.json under `out_dir`;
// returns the manifest as loaded back from disk.
ScenarioManifest generate_synthetic_scenario(const SyntheticSpec& spec,
                                             const std::filesystem::path& out_dir,
                                             std::size_t workers = default_workers());

}  // namespace transtab
