#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "transtab/matrix.hpp"
#include "transtab/names.hpp"

namespace transtab {

enum class CovarianceMode { kSpherical, kDiagonal };

struct MetricScore {
  Metric metric;
  double value = 0.0;
  // False when an iterative solver hit its cap; the value is the last iterate.
  bool converged = true;
};

// Per-class Gaussian fitted with 1/n_c moments plus a variance floor.
struct GaussianClassModel {
  std::int32_t class_id = 0;
  Eigen::VectorXd mean;
  // Length d for diagonal covariance, length 1 for spherical.
  Eigen::VectorXd variance;
  std::size_t sample_count = 0;
};

inline constexpr double kGbcVarianceFloor = 1e-6;

// ---------------------------------------------------------------------------
// LEEP: log expected empirical prediction.

MetricScore leep(const PredictionMatrix& predictions, const LabelVector& labels);

// Weighted form shared with NLEEP: `theta` is n x z row-stochastic, `weights`
// are per-sample empirical masses summing to one.
double leep_weighted(const Eigen::MatrixXd& theta, std::span<const std::int32_t> labels,
                     std::int32_t class_count, const Eigen::VectorXd& weights);

// ---------------------------------------------------------------------------
// NLEEP: LEEP over Gaussian-mixture posteriors of PCA-reduced features.

struct NleepConfig {
  double variance_fraction = 0.8;
  // 0 means "number of distinct target classes".
  std::size_t components = 0;
  double tolerance = 1e-4;
  int max_iterations = 200;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;

  friend bool operator==(const NleepConfig&, const NleepConfig&) = default;
};

// Samples are canonicalised (sorted, identical rows merged into weights)
// before fitting, so the score does not depend on sample order or on
// uniform duplication.
MetricScore nleep(const FeatureMatrix& features, const LabelVector& labels,
                  const NleepConfig& config = {});

// ---------------------------------------------------------------------------
// LogME: maximum log marginal evidence of a Bayesian linear model.

struct LogMeColumn {
  double alpha = 1.0;
  double beta = 1.0;
  double log_evidence = 0.0;
  int iterations = 0;
  bool converged = false;
  // Log evidence after each fixed-point update, filled when requested.
  std::vector<double> trace;
};

struct LogMeState {
  std::vector<LogMeColumn> columns;
  double score = 0.0;  // mean over columns of log_evidence / n
  bool converged = true;
};

// Decomposes F^T F once and solves each regression target against it.
class LogMeSolver {
 public:
  static constexpr int kMaxIterations = 100;
  static constexpr double kRelativeTolerance = 1e-3;

  // Throws MetricError on all-zero features.
  explicit LogMeSolver(const Eigen::MatrixXd& features);

  LogMeColumn solve(const Eigen::VectorXd& target, bool keep_trace = false) const;
  // Log evidence at fixed (alpha, beta).
  double log_evidence(const Eigen::VectorXd& target, double alpha, double beta) const;

  std::size_t samples() const { return n_; }
  std::size_t dims() const { return d_; }

 private:
  struct Evaluation {
    double gamma;             // effective number of well-determined weights
    double weight_sq_norm;    // m^T m of the posterior mean
    double residual_sq_norm;  // ||y - F m||^2
    double log_evidence;
  };
  Evaluation evaluate(const Eigen::VectorXd& y, const Eigen::VectorXd& projected, double alpha,
                      double beta) const;

  Eigen::MatrixXd features_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  Eigen::VectorXd eigenvalues_;   // of F^T F, length d
  Eigen::MatrixXd eigenvectors_;  // d x d
};

LogMeState logme_state(const FeatureMatrix& features, const LabelVector& labels,
                       bool keep_trace = false);
MetricScore logme(const FeatureMatrix& features, const LabelVector& labels);

// ---------------------------------------------------------------------------
// GBC: negative summed Bhattacharyya coefficients between class Gaussians.

// Throws MetricError naming any present class with fewer than two samples.
std::vector<GaussianClassModel> fit_class_gaussians(const Eigen::MatrixXd& features,
                                                    std::span<const std::int32_t> labels,
                                                    std::int32_t class_count,
                                                    CovarianceMode mode);
double bhattacharyya_distance(const GaussianClassModel& a, const GaussianClassModel& b);
MetricScore gbc(const FeatureMatrix& features, const LabelVector& labels,
                CovarianceMode mode = CovarianceMode::kDiagonal);

// ---------------------------------------------------------------------------
// H-score: trace(pinv(cov(f)) * cov(E[f|y])).

inline constexpr double kHScoreRidgeScale = 1e-6;
MetricScore hscore(const FeatureMatrix& features, const LabelVector& labels);

// ---------------------------------------------------------------------------
// NumC: number of distinct target classes.

MetricScore numc(const LabelVector& labels);

// ---------------------------------------------------------------------------
// Class-balanced subsampling: keeps n_keep rows without replacement with
// inclusion probability proportional to 1 / freq(class). Returns sorted
// indices; all indices when n_keep >= n.
std::vector<std::size_t> balanced_subsample_indices(const LabelVector& labels,
                                                    std::size_t n_keep, std::uint64_t seed);
std::pair<FeatureMatrix, LabelVector> balanced_subsample(const FeatureMatrix& features,
                                                         const LabelVector& labels,
                                                         std::size_t n_keep, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Dispatch by metric name.

struct MetricInputs {
  const FeatureMatrix* features = nullptr;
  const PredictionMatrix* predictions = nullptr;
  const LabelVector* labels = nullptr;
};

struct MetricOptions {
  NleepConfig nleep;
  CovarianceMode gbc_covariance = CovarianceMode::kDiagonal;
};

// Throws MetricError when a required input is missing or the metric fails.
MetricScore compute_metric(Metric metric, const MetricInputs& inputs,
                           const MetricOptions& options = {});

}  // namespace transtab
