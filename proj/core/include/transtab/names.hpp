#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace transtab {

enum class Metric { kLeep, kNleep, kLogMe, kGbc, kHScore, kNumC };
enum class Measure { kPearson, kKendall, kWeightedKendall, kRelAt1 };

inline constexpr std::array<Metric, 6> kAllMetrics = {
    Metric::kLeep, Metric::kNleep, Metric::kLogMe, Metric::kGbc, Metric::kHScore, Metric::kNumC};
// The five learned-feature metrics compared by default; NumC is opt-in.
inline constexpr std::array<Metric, 5> kDefaultMetrics = {
    Metric::kLeep, Metric::kNleep, Metric::kLogMe, Metric::kGbc, Metric::kHScore};
inline constexpr std::array<Measure, 4> kAllMeasures = {
    Measure::kPearson, Measure::kKendall, Measure::kWeightedKendall, Measure::kRelAt1};

std::string_view to_string(Metric m);
std::string_view to_string(Measure m);
std::optional<Metric> parse_metric(std::string_view s);
std::optional<Measure> parse_measure(std::string_view s);

// Metrics that read the feature matrix / the prediction matrix.
constexpr bool needs_features(Metric m) {
  return m == Metric::kNleep || m == Metric::kLogMe || m == Metric::kGbc || m == Metric::kHScore;
}
constexpr bool needs_predictions(Metric m) { return m == Metric::kLeep; }

}  // namespace transtab
