#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "transtab/errors.hpp"
#include "transtab/metrics.hpp"

namespace transtab {
namespace {

// Keeps the fixed point away from 0 and infinity when a target column is
// exactly fit or carries no signal.
constexpr double kMinPrecision = 1e-10;
constexpr double kMaxPrecision = 1e10;

double clamp_precision(double v) {
  if (std::isnan(v)) return kMaxPrecision;
  return std::clamp(v, kMinPrecision, kMaxPrecision);
}

}  // namespace

LogMeSolver::LogMeSolver(const Eigen::MatrixXd& features)
    : features_(features),
      n_(static_cast<std::size_t>(features.rows())),
      d_(static_cast<std::size_t>(features.cols())) {
  if (n_ == 0 || d_ == 0) throw MetricError("logme: empty feature matrix");
  if (features_.cwiseAbs().maxCoeff() == 0.0) throw MetricError("logme: all-zero features");
  // F^T F = V diag(s) V^T; s are the squared singular values of F.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(features_.transpose() * features_);
  eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
  eigenvectors_ = eig.eigenvectors();
}

LogMeSolver::Evaluation LogMeSolver::evaluate(const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& projected, double alpha,
                                              double beta) const {
  const double n = static_cast<double>(n_);
  const double d = static_cast<double>(d_);
  const Eigen::ArrayXd s = eigenvalues_.array();
  const Eigen::ArrayXd denom = alpha + beta * s;
  const Eigen::VectorXd weights = eigenvectors_ * (beta * projected.array() / denom).matrix();
  Evaluation ev;
  ev.gamma = (beta * s / denom).sum();
  ev.weight_sq_norm = weights.squaredNorm();
  ev.residual_sq_norm = (y - features_ * weights).squaredNorm();
  ev.log_evidence = 0.5 * d * std::log(alpha) + 0.5 * n * std::log(beta) -
                    0.5 * denom.log().sum() - 0.5 * beta * ev.residual_sq_norm -
                    0.5 * alpha * ev.weight_sq_norm - 0.5 * n * std::log(2.0 * std::numbers::pi);
  return ev;
}

double LogMeSolver::log_evidence(const Eigen::VectorXd& y, double alpha, double beta) const {
  const Eigen::VectorXd projected = eigenvectors_.transpose() * (features_.transpose() * y);
  return evaluate(y, projected, alpha, beta).log_evidence;
}

LogMeColumn LogMeSolver::solve(const Eigen::VectorXd& y, bool keep_trace) const {
  const Eigen::VectorXd projected = eigenvectors_.transpose() * (features_.transpose() * y);
  const double n = static_cast<double>(n_);

  // Fixed-point iteration from (alpha, beta); alpha stays put when pinned.
  auto iterate = [&](double alpha, double beta, bool pin_alpha, std::vector<double>* trace) {
    LogMeColumn col;
    Evaluation st = evaluate(y, projected, alpha, beta);
    if (trace) trace->push_back(st.log_evidence);
    for (int it = 1; it <= kMaxIterations; ++it) {
      const double next_alpha =
          pin_alpha ? alpha : clamp_precision(st.gamma / st.weight_sq_norm);
      const double next_beta = clamp_precision((n - st.gamma) / st.residual_sq_norm);
      const double rel_alpha = std::abs(next_alpha - alpha) / alpha;
      const double rel_beta = std::abs(next_beta - beta) / beta;
      alpha = next_alpha;
      beta = next_beta;
      st = evaluate(y, projected, alpha, beta);
      col.iterations = it;
      if (trace) trace->push_back(st.log_evidence);
      if (rel_alpha < kRelativeTolerance && rel_beta < kRelativeTolerance) {
        col.converged = true;
        break;
      }
    }
    col.alpha = alpha;
    col.beta = beta;
    col.log_evidence = st.log_evidence;
    return col;
  };

  std::vector<double> trace;
  LogMeColumn col = iterate(1.0, 1.0, false, keep_trace ? &trace : nullptr);
  // The iteration can settle on a stationary point below the supremum
  // reached as alpha grows without bound (weights shrunk to zero).
  if (col.alpha < kMaxPrecision) {
    const LogMeColumn edge = iterate(kMaxPrecision, col.beta, true, nullptr);
    if (edge.log_evidence > col.log_evidence) {
      const int iterations = col.iterations + edge.iterations;
      col = edge;
      col.iterations = iterations;
    }
  }
  col.trace = std::move(trace);
  return col;
}

LogMeState logme_state(const FeatureMatrix& features, const LabelVector& labels, bool keep_trace) {
  if (labels.empty()) throw MetricError("logme: no samples");
  if (features.rows() != labels.size()) {
    throw MetricError("logme: " + std::to_string(features.rows()) + " feature rows but " +
                      std::to_string(labels.size()) + " labels");
  }
  const Eigen::MatrixXd f = features.to_eigen();
  const LogMeSolver solver(f);
  const auto n = static_cast<Eigen::Index>(labels.size());

  LogMeState state;
  double total = 0.0;
  for (std::int32_t c = 0; c < labels.class_count(); ++c) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[i] == c ? 1.0 : 0.0;
    LogMeColumn col = solver.solve(y, keep_trace);
    state.converged = state.converged && col.converged;
    total += col.log_evidence / static_cast<double>(n);
    state.columns.push_back(std::move(col));
  }
  state.score = total / static_cast<double>(state.columns.size());
  return state;
}

MetricScore logme(const FeatureMatrix& features, const LabelVector& labels) {
  const LogMeState state = logme_state(features, labels);
  if (!std::isfinite(state.score)) throw MetricError("logme: non-finite evidence");
  return {Metric::kLogMe, state.score, state.converged};
}

}  // namespace transtab
