#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "transtab/engine.hpp"

namespace transtab {

// The setup component two connected experiments differ in.
enum class Component { kSourcePool, kTarget, kMeasure };

inline constexpr Component kAllComponents[] = {Component::kTarget, Component::kMeasure,
                                               Component::kSourcePool};

std::string_view to_string(Component c);
std::optional<Component> parse_component(std::string_view s);

// Kendall tau between two metric-quality vectors. Metrics undefined in either
// outcome are dropped first; fewer than two shared metrics gives no value.
std::optional<double> agreement(std::span<const double> first, std::span<const double> second);
std::optional<double> agreement(const Outcome& first, const Outcome& second);

enum class PairMode { kExact, kSampled };

struct EdgeOptions {
  PairMode mode = PairMode::kSampled;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
};

struct ExperimentEdge {
  std::size_t first = 0;
  std::size_t second = 0;
  Component component = Component::kTarget;
  std::optional<double> agreement;
};

// Experiments grouped by the two components held fixed; every within-group
// pair is an edge for `component`.
class EdgeIndex {
 public:
  EdgeIndex(const ExperimentSet& xs, Component component);

  std::uint64_t total_pairs() const { return total_pairs_; }
  // The `rank`-th pair in (group, i, j) lexicographic order.
  std::pair<std::size_t, std::size_t> pair_at(std::uint64_t rank) const;
  std::size_t group_count() const { return group_start_.size() - 1; }
  std::span<const std::size_t> group(std::size_t g) const {
    return std::span<const std::size_t>(order_).subspan(group_start_[g],
                                                        group_start_[g + 1] - group_start_[g]);
  }

 private:
  std::vector<std::size_t> order_;        // experiment indices sorted by group key
  std::vector<std::size_t> group_start_;  // offsets into order_, plus end sentinel
  std::vector<std::uint64_t> pair_start_; // cumulative pair counts per group
  std::uint64_t total_pairs_ = 0;
};

struct EdgeSelection {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  bool exact = true;
  std::uint64_t total_pairs = 0;
};

// Exact mode lists every pair; sampled mode draws `budget` distinct pairs
// uniformly (seeded) and falls back to exact when the budget covers them all.
EdgeSelection select_edges(const ExperimentSet& xs, Component component,
                           const EdgeOptions& options);
std::vector<ExperimentEdge> build_edges(const ExperimentSet& xs, Component component,
                                        const EdgeOptions& options);

struct ComponentStability {
  Component component = Component::kTarget;
  std::optional<double> ss;
  bool exact = true;
  std::uint64_t total_pairs = 0;
  std::uint64_t evaluated_pairs = 0;
  std::uint64_t undefined_pairs = 0;  // agreement undefined, excluded from the mean
  std::string note;
};

ComponentStability setup_stability(const ExperimentSet& xs, Component component,
                                   const EdgeOptions& options,
                                   std::size_t workers = default_workers());
// Mean agreement over explicit edges; undefined agreements are skipped.
std::optional<double> setup_stability(std::span<const ExperimentEdge> edges);

struct StabilityReport {
  std::vector<ComponentStability> components;
  EdgeOptions options;
};

StabilityReport stability_report(const ExperimentSet& xs, std::span<const Component> components,
                                 const EdgeOptions& options,
                                 std::size_t workers = default_workers());

// ---------------------------------------------------------------------------
// Win rate: a metric wins an experiment when its quality is strictly greater
// than every other defined metric's quality.

struct WinRateTable {
  std::vector<Metric> metrics;
  std::vector<Measure> measures;
  // [measure][metric]
  std::vector<std::vector<std::uint64_t>> wins;
  std::vector<std::vector<std::uint64_t>> undefined;
  std::vector<std::uint64_t> ties;        // shared maximum, no winner
  std::vector<std::uint64_t> no_contest;  // no metric defined
  std::vector<std::uint64_t> experiments;

  double win_percent(std::size_t measure, std::size_t metric) const;
  double tie_percent(std::size_t measure) const;
  double no_contest_percent(std::size_t measure) const;
  // Wins over all experiments regardless of measure, in percent.
  double average_percent(std::size_t metric) const;
};

WinRateTable win_rate(const ExperimentSet& xs);

// Text renderings: CSV tables laid out as (component, SS) and
// (metric x measure win %, Avg), plus a JSON document with all counts.
std::string stability_csv(const StabilityReport& report);
std::string win_rate_csv(const WinRateTable& table);
std::string stability_json(const StabilityReport& report, const WinRateTable* table);

}  // namespace transtab
