#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "transtab/errors.hpp"
#include "transtab/gmm.hpp"
#include "transtab/metrics.hpp"

namespace transtab {
namespace {

struct CanonicalSamples {
  Eigen::MatrixXd features;
  std::vector<std::int32_t> labels;
  Eigen::VectorXd weights;
};

// Sorts samples lexicographically by (feature row, label) and merges exact
// duplicates into weights, so the fit sees the empirical distribution only.
CanonicalSamples canonicalise(const FeatureMatrix& features, const LabelVector& labels) {
  const Matrix& m = features.matrix();
  std::vector<std::size_t> order(m.rows());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto ra = m.row(a);
    auto rb = m.row(b);
    if (auto c = std::lexicographical_compare_three_way(ra.begin(), ra.end(), rb.begin(), rb.end());
        c != 0) {
      return c < 0;
    }
    return labels[a] < labels[b];
  };
  std::sort(order.begin(), order.end(), less);

  std::vector<std::size_t> unique_rows;
  std::vector<double> counts;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && !less(order[i - 1], order[i])) {
      counts.back() += 1.0;
    } else {
      unique_rows.push_back(order[i]);
      counts.push_back(1.0);
    }
  }

  CanonicalSamples out;
  const auto u = static_cast<Eigen::Index>(unique_rows.size());
  out.features.resize(u, static_cast<Eigen::Index>(m.cols()));
  out.weights.resize(u);
  out.labels.reserve(unique_rows.size());
  const double n = static_cast<double>(m.rows());
  for (Eigen::Index i = 0; i < u; ++i) {
    auto r = m.row(unique_rows[i]);
    for (std::size_t c = 0; c < r.size(); ++c) out.features(i, static_cast<Eigen::Index>(c)) = r[c];
    out.labels.push_back(labels[unique_rows[i]]);
    out.weights(i) = counts[i] / n;
  }
  return out;
}

}  // namespace

MetricScore nleep(const FeatureMatrix& features, const LabelVector& labels,
                  const NleepConfig& config) {
  if (labels.empty()) throw MetricError("nleep: no samples");
  if (features.rows() != labels.size()) {
    throw MetricError("nleep: " + std::to_string(features.rows()) + " feature rows but " +
                      std::to_string(labels.size()) + " labels");
  }
  const std::size_t components =
      config.components > 0 ? config.components : labels.distinct_classes();
  if (labels.size() < components) {
    throw MetricError("nleep: " + std::to_string(labels.size()) + " samples for " +
                      std::to_string(components) + " mixture components");
  }

  const CanonicalSamples samples = canonicalise(features, labels);
  const Eigen::MatrixXd reduced =
      pca_project(samples.features, samples.weights, config.variance_fraction);

  GmmFitOptions opt;
  opt.components = components;
  opt.tolerance = config.tolerance;
  opt.max_iterations = config.max_iterations;
  opt.restarts = std::max<std::size_t>(config.restarts, 1);
  opt.seed = config.seed;
  const GmmModel model = fit_gmm(reduced, samples.weights, opt);
  const Eigen::MatrixXd resp = gmm_responsibilities(model, reduced);

  const double value = leep_weighted(resp, samples.labels, labels.class_count(), samples.weights);
  if (!std::isfinite(value)) throw MetricError("nleep: non-finite score");
  return {Metric::kNleep, std::min(value, 0.0), model.converged};
}

}  // namespace transtab
