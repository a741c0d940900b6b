#include <cmath>
#include <string>

#include "transtab/errors.hpp"
#include "transtab/metrics.hpp"

namespace transtab {

double leep_weighted(const Eigen::MatrixXd& theta, std::span<const std::int32_t> labels,
                     std::int32_t class_count, const Eigen::VectorXd& weights) {
  const Eigen::Index n = theta.rows();
  const Eigen::Index z = theta.cols();
  if (n == 0) throw MetricError("leep: no samples");
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw MetricError("leep: " + std::to_string(n) + " prediction rows but " +
                      std::to_string(labels.size()) + " labels");
  }

  // Empirical joint P(y, z) and marginal P(z).
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(class_count, z);
  for (Eigen::Index i = 0; i < n; ++i) {
    joint.row(labels[i]) += weights(i) * theta.row(i);
  }
  const Eigen::RowVectorXd marginal = joint.colwise().sum();

  // P(y | z); columns with no mass are left at zero and drop out of the sum.
  Eigen::MatrixXd conditional = Eigen::MatrixXd::Zero(class_count, z);
  for (Eigen::Index c = 0; c < z; ++c) {
    if (marginal(c) > 0.0) conditional.col(c) = joint.col(c) / marginal(c);
  }

  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double eep = conditional.row(labels[i]).dot(theta.row(i));
    total += weights(i) * std::log(eep);
  }
  return total;
}

MetricScore leep(const PredictionMatrix& predictions, const LabelVector& labels) {
  if (labels.empty()) throw MetricError("leep: no samples");
  if (predictions.rows() != labels.size()) {
    throw MetricError("leep: " + std::to_string(predictions.rows()) + " prediction rows but " +
                      std::to_string(labels.size()) + " labels");
  }
  const auto n = static_cast<Eigen::Index>(labels.size());
  const Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const double value =
      leep_weighted(predictions.to_eigen(), labels.ids(), labels.class_count(), weights);
  if (!std::isfinite(value)) throw MetricError("leep: non-finite score");
  return {Metric::kLeep, std::min(value, 0.0)};
}

}  // namespace transtab
