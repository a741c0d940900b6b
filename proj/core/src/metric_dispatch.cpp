#include <string>

#include "transtab/errors.hpp"
#include "transtab/metrics.hpp"

namespace transtab {

MetricScore compute_metric(Metric metric, const MetricInputs& in, const MetricOptions& options) {
  if (in.labels == nullptr) throw MetricError(std::string(to_string(metric)) + ": no labels");
  if (needs_features(metric) && in.features == nullptr) {
    throw MetricError(std::string(to_string(metric)) + ": feature matrix required");
  }
  if (needs_predictions(metric) && in.predictions == nullptr) {
    throw MetricError(std::string(to_string(metric)) + ": prediction matrix required");
  }
  switch (metric) {
    case Metric::kLeep: return leep(*in.predictions, *in.labels);
    case Metric::kNleep: return nleep(*in.features, *in.labels, options.nleep);
    case Metric::kLogMe: return logme(*in.features, *in.labels);
    case Metric::kGbc: return gbc(*in.features, *in.labels, options.gbc_covariance);
    case Metric::kHScore: return hscore(*in.features, *in.labels);
    case Metric::kNumC: return numc(*in.labels);
  }
  throw MetricError("unknown metric");
}

}  // namespace transtab
