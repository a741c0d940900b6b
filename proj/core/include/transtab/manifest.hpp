#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "transtab/metrics.hpp"
#include "transtab/names.hpp"

namespace transtab {

// Source pools are stored as bit masks over the manifest's source list.
inline constexpr std::size_t kMaxSources = 64;

// Data files for one (source, target) cell. Paths are resolved against the
// manifest directory at load time; predictions may be empty when no
// configured metric needs them.
struct PairPaths {
  std::string source;
  std::string target;
  std::filesystem::path features;
  std::filesystem::path predictions;
  std::filesystem::path labels;

  friend bool operator==(const PairPaths&, const PairPaths&) = default;
};

struct SubsampleConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;

  friend bool operator==(const SubsampleConfig&, const SubsampleConfig&) = default;
};

// Validated scenario description. Id lists are sorted and metric/measure
// lists are in canonical enum order, so two manifests that differ only in
// entry order compare equal.
struct ScenarioManifest {
  std::string name;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  std::size_t pool_size = 0;
  std::vector<Measure> measures;
  std::vector<Metric> metrics;
  std::filesystem::path accuracies;
  std::vector<PairPaths> pairs;  // sorted by (source, target)
  std::optional<SubsampleConfig> subsample;
  NleepConfig nleep;
  CovarianceMode gbc_covariance = CovarianceMode::kDiagonal;
  std::uint64_t seed = 0;

  // Indices into `sources` of every source usable for `target_index`
  // (all sources except one with the same id as the target).
  std::vector<std::size_t> candidates(std::size_t target_index) const;
  const PairPaths* find_pair(std::string_view source, std::string_view target) const;

  friend bool operator==(const ScenarioManifest&, const ScenarioManifest&) = default;
};

// Throws ManifestError (or IoError when the file is unreadable).
ScenarioManifest load_manifest(const std::filesystem::path& path);
ScenarioManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
// Writes paths relative to the manifest's own directory where possible.
void save_manifest(const ScenarioManifest& manifest, const std::filesystem::path& path);

}  // namespace transtab
