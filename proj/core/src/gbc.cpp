#include <cmath>
#include <string>

#include "transtab/errors.hpp"
#include "transtab/metrics.hpp"

namespace transtab {

std::vector<GaussianClassModel> fit_class_gaussians(const Eigen::MatrixXd& features,
                                                    std::span<const std::int32_t> labels,
                                                    std::int32_t class_count,
                                                    CovarianceMode mode) {
  const Eigen::Index d = features.cols();
  std::vector<Eigen::VectorXd> sums(class_count, Eigen::VectorXd::Zero(d));
  std::vector<std::size_t> counts(class_count, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sums[labels[i]] += features.row(static_cast<Eigen::Index>(i)).transpose();
    ++counts[labels[i]];
  }

  std::vector<GaussianClassModel> models;
  for (std::int32_t c = 0; c < class_count; ++c) {
    if (counts[c] == 0) continue;
    if (counts[c] < 2) {
      throw MetricError("gbc: class " + std::to_string(c) + " has " + std::to_string(counts[c]) +
                        " sample; at least 2 are required");
    }
    GaussianClassModel g;
    g.class_id = c;
    g.sample_count = counts[c];
    g.mean = sums[c] / static_cast<double>(counts[c]);
    models.push_back(std::move(g));
  }

  std::vector<Eigen::VectorXd> sq(class_count, Eigen::VectorXd::Zero(d));
  std::vector<std::size_t> slot(class_count, 0);
  for (std::size_t k = 0; k < models.size(); ++k) slot[models[k].class_id] = k;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& mean = models[slot[labels[i]]].mean;
    sq[labels[i]] += (features.row(static_cast<Eigen::Index>(i)).transpose() - mean).array().square().matrix();
  }
  for (auto& g : models) {
    Eigen::VectorXd var = sq[g.class_id] / static_cast<double>(g.sample_count);
    if (mode == CovarianceMode::kSpherical) {
      g.variance = Eigen::VectorXd::Constant(1, var.mean() + kGbcVarianceFloor);
    } else {
      g.variance = var.array() + kGbcVarianceFloor;
    }
  }
  return models;
}

double bhattacharyya_distance(const GaussianClassModel& a, const GaussianClassModel& b) {
  const Eigen::Index d = a.mean.size();
  const Eigen::VectorXd diff = a.mean - b.mean;
  if (a.variance.size() == 1) {
    const double va = a.variance(0);
    const double vb = b.variance(0);
    const double v = 0.5 * (va + vb);
    return 0.125 * diff.squaredNorm() / v +
           0.5 * static_cast<double>(d) * (std::log(v) - 0.5 * (std::log(va) + std::log(vb)));
  }
  const Eigen::ArrayXd v = 0.5 * (a.variance.array() + b.variance.array());
  return 0.125 * (diff.array().square() / v).sum() +
         0.5 * (v.log() - 0.5 * (a.variance.array().log() + b.variance.array().log())).sum();
}

MetricScore gbc(const FeatureMatrix& features, const LabelVector& labels, CovarianceMode mode) {
  if (features.rows() != labels.size()) {
    throw MetricError("gbc: " + std::to_string(features.rows()) + " feature rows but " +
                      std::to_string(labels.size()) + " labels");
  }
  const auto models =
      fit_class_gaussians(features.to_eigen(), labels.ids(), labels.class_count(), mode);
  double total = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      total += std::exp(-bhattacharyya_distance(models[i], models[j]));
    }
  }
  if (!std::isfinite(total)) throw MetricError("gbc: non-finite score");
  return {Metric::kGbc, -total};
}

}  // namespace transtab
