#include "transtab/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "transtab/errors.hpp"

namespace transtab {
namespace {

// log N(x | mean, diag(var)) for every sample against one component.
Eigen::VectorXd component_log_density(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& mean,
                                      const Eigen::RowVectorXd& var) {
  const double log_norm =
      -0.5 * (static_cast<double>(x.cols()) * std::log(2.0 * std::numbers::pi) +
              var.array().log().sum());
  const Eigen::RowVectorXd inv = var.cwiseInverse();
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out(i) = log_norm - 0.5 * ((x.row(i) - mean).array().square() * inv.array()).sum();
  }
  return out;
}

// Fills `resp` with normalised posteriors; returns the per-sample log
// marginal densities.
Eigen::VectorXd e_step(const GmmModel& model, const Eigen::MatrixXd& x, Eigen::MatrixXd& resp) {
  const auto k = static_cast<Eigen::Index>(model.components());
  resp.resize(x.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    resp.col(c) = component_log_density(x, model.means.row(c), model.variances.row(c)).array() +
                  std::log(model.weights(c));
  }
  Eigen::VectorXd log_marginal(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double top = resp.row(i).maxCoeff();
    const double lse = top + std::log((resp.row(i).array() - top).exp().sum());
    resp.row(i) = (resp.row(i).array() - lse).exp();
    log_marginal(i) = lse;
  }
  return log_marginal;
}

std::vector<Eigen::Index> kmeans_pp_seeds(const Eigen::MatrixXd& x, const Eigen::VectorXd& w,
                                          std::size_t k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> seeds;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto draw = [&](const Eigen::VectorXd& mass) {
    const double total = mass.sum();
    double u = unit(rng) * total;
    for (Eigen::Index i = 0; i < n; ++i) {
      u -= mass(i);
      if (u < 0.0 && mass(i) > 0.0) return i;
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      if (mass(i) > 0.0) return i;
    }
    return Eigen::Index{0};
  };

  seeds.push_back(draw(w));
  Eigen::VectorXd nearest = (x.rowwise() - x.row(seeds[0])).rowwise().squaredNorm();
  while (seeds.size() < k) {
    const Eigen::VectorXd mass = w.cwiseProduct(nearest);
    if (!(mass.sum() > 0.0)) break;
    const Eigen::Index next = draw(mass);
    seeds.push_back(next);
    nearest = nearest.cwiseMin((x.rowwise() - x.row(next)).rowwise().squaredNorm());
  }
  return seeds;
}

GmmModel fit_once(const Eigen::MatrixXd& x, const Eigen::VectorXd& w, const GmmFitOptions& opt,
                  std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const auto k = static_cast<Eigen::Index>(opt.components);
  const auto seeds = kmeans_pp_seeds(x, w, opt.components, rng);
  if (static_cast<Eigen::Index>(seeds.size()) < k) {
    throw MetricError("gmm: fewer distinct points than components");
  }

  // Initial hard assignment to the nearest seed, then one M-step.
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < k; ++c) {
      const double dist = (x.row(i) - x.row(seeds[c])).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = c;
      }
    }
    resp(i, best) = 1.0;
  }

  GmmModel model;
  model.means.resize(k, d);
  model.variances.resize(k, d);
  model.weights.resize(k);
  const Eigen::RowVectorXd global_var =
      ((x.rowwise() - (w.transpose() * x)).array().square().colwise() * w.array())
          .colwise()
          .sum()
          .matrix();

  auto m_step = [&] {
    for (Eigen::Index c = 0; c < k; ++c) {
      const Eigen::VectorXd rw = resp.col(c).cwiseProduct(w);
      const double mass = rw.sum();
      if (!(mass > 1e-12)) {
        // Collapsed component: park it on the global moments with tiny weight.
        model.weights(c) = 1e-12;
        model.means.row(c) = w.transpose() * x;
        model.variances.row(c) = global_var.array() + opt.variance_floor;
        continue;
      }
      model.weights(c) = mass;
      const Eigen::RowVectorXd mean = (rw.transpose() * x) / mass;
      model.means.row(c) = mean;
      model.variances.row(c) =
          ((x.rowwise() - mean).array().square().colwise() * rw.array()).colwise().sum() / mass +
          opt.variance_floor;
    }
    model.weights /= model.weights.sum();
  };

  m_step();
  double previous = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const Eigen::VectorXd log_marginal = e_step(model, x, resp);
    const double ll = w.dot(log_marginal);
    if (!std::isfinite(ll)) throw MetricError("gmm: log-likelihood became non-finite");
    model.log_likelihood = ll;
    model.iterations = it;
    if (std::abs(ll - previous) < opt.tolerance) {
      model.converged = true;
      break;
    }
    previous = ll;
    m_step();
  }
  if (!model.means.allFinite() || !model.variances.allFinite() || !model.weights.allFinite()) {
    throw MetricError("gmm: parameters became non-finite");
  }
  return model;
}

}  // namespace

GmmModel fit_gmm(const Eigen::MatrixXd& x, const Eigen::VectorXd& w, const GmmFitOptions& opt) {
  const auto k = static_cast<Eigen::Index>(opt.components);
  if (k < 1) throw MetricError("gmm: need at least one component");
  if (x.rows() < k) {
    throw MetricError("gmm: " + std::to_string(x.rows()) + " distinct samples for " +
                      std::to_string(k) + " components");
  }
  std::mt19937_64 rng(opt.seed);
  GmmModel best = fit_once(x, w, opt, rng);
  for (std::size_t r = 1; r < opt.restarts; ++r) {
    GmmModel next = fit_once(x, w, opt, rng);
    if (next.log_likelihood > best.log_likelihood) best = std::move(next);
  }
  return best;
}

Eigen::MatrixXd gmm_responsibilities(const GmmModel& model, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd resp;
  e_step(model, x, resp);
  return resp;
}

Eigen::MatrixXd pca_project(const Eigen::MatrixXd& x, const Eigen::VectorXd& w,
                            double variance_fraction) {
  const Eigen::RowVectorXd mean = w.transpose() * x;
  const Eigen::MatrixXd centred = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centred.transpose() * w.asDiagonal() * centred;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd values = eig.eigenvalues().cwiseMax(0.0);
  const double total = values.sum();
  const Eigen::Index d = x.cols();
  if (!(total > 0.0)) return centred.leftCols(1) * 0.0;

  Eigen::Index keep = 0;
  double covered = 0.0;
  while (keep < d) {
    covered += values(d - 1 - keep);
    ++keep;
    if (covered >= variance_fraction * total * (1.0 - 1e-12)) break;
  }
  Eigen::MatrixXd basis(d, keep);
  for (Eigen::Index j = 0; j < keep; ++j) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - j);
    // Fix the sign so the projection does not depend on the solver's choice.
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
    basis.col(j) = v;
  }
  return centred * basis;
}

}  // namespace transtab
