#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace transtab {

// Diagonal-covariance Gaussian mixture. Row k of `means`/`variances` is
// component k.
struct GmmModel {
  Eigen::MatrixXd means;
  Eigen::MatrixXd variances;
  Eigen::VectorXd weights;
  double log_likelihood = 0.0;  // weighted mean log-likelihood of the fit
  int iterations = 0;
  bool converged = false;

  std::size_t components() const { return static_cast<std::size_t>(weights.size()); }
};

struct GmmFitOptions {
  std::size_t components = 1;
  double tolerance = 1e-4;
  int max_iterations = 200;
  double variance_floor = 1e-6;
  std::size_t restarts = 1;  // independent seedings; the best log-likelihood wins
  std::uint64_t seed = 0;
};

// Weighted EM with k-means++ seeding. `sample_weights` must be positive and
// sum to one. Throws MetricError if the fit turns non-finite or there are
// fewer distinct samples than components.
GmmModel fit_gmm(const Eigen::MatrixXd& x, const Eigen::VectorXd& sample_weights,
                 const GmmFitOptions& options);

// n x K posterior responsibilities.
Eigen::MatrixXd gmm_responsibilities(const GmmModel& model, const Eigen::MatrixXd& x);

// Projects weighted, centred samples onto the fewest principal axes whose
// eigenvalues cover `variance_fraction` of the total variance.
Eigen::MatrixXd pca_project(const Eigen::MatrixXd& x, const Eigen::VectorXd& sample_weights,
                            double variance_fraction);

}  // namespace transtab
