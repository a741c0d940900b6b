#include <cmath>
#include <string>

#include "transtab/errors.hpp"
#include "transtab/metrics.hpp"

namespace transtab {

MetricScore hscore(const FeatureMatrix& features, const LabelVector& labels) {
  if (labels.empty()) throw MetricError("hscore: no samples");
  if (features.rows() != labels.size()) {
    throw MetricError("hscore: " + std::to_string(features.rows()) + " feature rows but " +
                      std::to_string(labels.size()) + " labels");
  }
  const Eigen::MatrixXd f = features.to_eigen();
  const Eigen::Index n = f.rows();
  const Eigen::Index d = f.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  const Eigen::RowVectorXd mean = f.colwise().mean();
  const Eigen::MatrixXd centred = f.rowwise() - mean;
  const Eigen::MatrixXd cov = centred.transpose() * centred * inv_n;

  // Between-class covariance: each sample replaced by its class mean.
  const auto c = labels.class_count();
  Eigen::MatrixXd class_sum = Eigen::MatrixXd::Zero(c, d);
  Eigen::VectorXd class_n = Eigen::VectorXd::Zero(c);
  for (Eigen::Index i = 0; i < n; ++i) {
    class_sum.row(labels[i]) += centred.row(i);
    class_n(labels[i]) += 1.0;
  }
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(d, d);
  for (std::int32_t k = 0; k < c; ++k) {
    if (class_n(k) == 0.0) continue;
    const Eigen::RowVectorXd m = class_sum.row(k) / class_n(k);
    between += class_n(k) * inv_n * (m.transpose() * m);
  }

  const double ridge = kHScoreRidgeScale * cov.trace() / static_cast<double>(d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      cov + ridge * Eigen::MatrixXd::Identity(d, d));
  const Eigen::VectorXd values = eig.eigenvalues();
  const double cutoff =
      values.cwiseAbs().maxCoeff() * static_cast<double>(d) * Eigen::NumTraits<double>::epsilon();
  Eigen::VectorXd inv_values(d);
  for (Eigen::Index i = 0; i < d; ++i) inv_values(i) = values(i) > cutoff ? 1.0 / values(i) : 0.0;
  const Eigen::MatrixXd& v = eig.eigenvectors();
  // trace(V diag(1/s) V^T B) = sum_i (1/s_i) v_i^T B v_i
  const double value = ((v.transpose() * between * v).diagonal().array() * inv_values.array()).sum();
  if (!std::isfinite(value)) throw MetricError("hscore: non-finite score");
  return {Metric::kHScore, std::max(value, 0.0)};
}

MetricScore numc(const LabelVector& labels) {
  return {Metric::kNumC, static_cast<double>(labels.distinct_classes())};
}

}  // namespace transtab
