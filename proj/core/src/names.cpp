#include "transtab/names.hpp"

namespace transtab {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kLeep: return "leep";
    case Metric::kNleep: return "nleep";
    case Metric::kLogMe: return "logme";
    case Metric::kGbc: return "gbc";
    case Metric::kHScore: return "hscore";
    case Metric::kNumC: return "numc";
  }
  return "?";
}

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::kPearson: return "pearson";
    case Measure::kKendall: return "kendall";
    case Measure::kWeightedKendall: return "weighted_kendall";
    case Measure::kRelAt1: return "rel_at_1";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view s) {
  for (auto m : kAllMetrics) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<Measure> parse_measure(std::string_view s) {
  for (auto m : kAllMeasures) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

}  // namespace transtab
