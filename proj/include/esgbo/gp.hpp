#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "esgbo/errors.hpp"

namespace esgbo {

struct KernelParams {
  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_variance = 0.0;
};

inline void validate(const KernelParams& params, Eigen::Index dim) {
  if (!(params.signal_variance > 0.0) || !std::isfinite(params.signal_variance))
    throw MalformedInputError("kernel params: signal variance must be positive");
  if (params.lengthscales.size() != dim)
    throw MalformedInputError("kernel params: expected " + std::to_string(dim) +
                              " lengthscales, got " + std::to_string(params.lengthscales.size()));
  for (Eigen::Index d = 0; d < dim; ++d)
    if (!(params.lengthscales[d] > 0.0) || !std::isfinite(params.lengthscales[d]))
      throw MalformedInputError("kernel params: lengthscales must be positive");
  if (!(params.noise_variance >= 0.0) || !std::isfinite(params.noise_variance))
    throw MalformedInputError("kernel params: noise variance must be non-negative");
}

/// Squared-exponential covariance with one lengthscale per input dimension.
inline double kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                     const KernelParams& params) {
  if (x.size() != x2.size()) throw MalformedInputError("kernel: dimension mismatch");
  validate(params, x.size());
  double q = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    const double scaled = (x[d] - x2[d]) / params.lengthscales[d];
    q += scaled * scaled;
  }
  return params.signal_variance * std::exp(-0.5 * q);
}

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact GP regressor over observed (input, target) pairs.
///
/// Targets are standardized internally (subtract mean, divide by sample std) and
/// de-standardized in predict, so the zero-mean prior refers to the standardized
/// scale. Kernel hyperparameters therefore describe the standardized targets.
/// Immutable once fitted; safe to share across concurrent readers.
class GpSurrogate {
 public:
  static GpSurrogate fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const KernelParams& params) {
    const Eigen::Index t = X.rows();
    if (t < 1) throw MalformedInputError("gp fit: at least one observation required");
    if (y.size() != t)
      throw MalformedInputError("gp fit: " + std::to_string(t) + " inputs vs " +
                                std::to_string(y.size()) + " targets");
    if (!X.allFinite() || !y.allFinite())
      throw MalformedInputError("gp fit: non-finite entries in the training data");
    validate(params, X.cols());

    GpSurrogate gp;
    gp.X_ = X;
    gp.y_ = y;
    gp.params_ = params;

    gp.target_mean_ = y.mean();
    double scale = 0.0;
    if (t >= 2) scale = std::sqrt((y.array() - gp.target_mean_).square().sum() / double(t - 1));
    gp.target_scale_ = scale > 1e-12 ? scale : 1.0;
    gp.standardized_targets_ = (y.array() - gp.target_mean_) / gp.target_scale_;

    Eigen::MatrixXd K(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
      for (Eigen::Index j = i; j < t; ++j) {
        const double k = kernel(X.row(i).transpose(), X.row(j).transpose(), params);
        K(i, j) = k;
        K(j, i) = k;
      }
    }

    // Jitter escalation: 1e-10 times powers of ten, capped at 1e-4.
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
    while (true) {
      Eigen::MatrixXd A = K;
      A.diagonal().array() += params.noise_variance + jitter;
      llt.compute(A);
      if (llt.info() == Eigen::Success) break;
      jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
      if (jitter > 1e-4)
        throw NumericalConditioningError(
            "gp fit: covariance factorization failed even with maximum jitter");
    }
    gp.jitter_ = jitter;
    gp.chol_ = llt.matrixL();
    gp.alpha_ = llt.solve(gp.standardized_targets_);
    gp.half_log_det_ = gp.chol_.diagonal().array().log().sum();
    return gp;
  }

  Prediction predict(const Eigen::VectorXd& xstar) const {
    const Eigen::Index t = X_.rows();
    Eigen::VectorXd kstar(t);
    for (Eigen::Index i = 0; i < t; ++i)
      kstar[i] = kernel(X_.row(i).transpose(), xstar, params_);
    const double mean_std = kstar.dot(alpha_);
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(kstar);
    const double var_std = kernel(xstar, xstar, params_) - v.squaredNorm();
    return {target_mean_ + target_scale_ * mean_std,
            target_scale_ * target_scale_ * std::max(var_std, 0.0)};
  }

  /// Of the standardized targets under the fitted (jittered) covariance.
  double log_marginal_likelihood() const {
    const auto t = static_cast<double>(X_.rows());
    return -0.5 * standardized_targets_.dot(alpha_) - half_log_det_ -
           0.5 * t * std::log(2.0 * std::numbers::pi);
  }

  const Eigen::MatrixXd& inputs() const { return X_; }
  const Eigen::VectorXd& targets() const { return y_; }
  const KernelParams& params() const { return params_; }
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double target_mean() const { return target_mean_; }
  double target_scale() const { return target_scale_; }
  double jitter() const { return jitter_; }
  Eigen::Index n_observations() const { return X_.rows(); }
  Eigen::Index dimension() const { return X_.cols(); }

 private:
  GpSurrogate() = default;

  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  KernelParams params_;
  double target_mean_ = 0.0;
  double target_scale_ = 1.0;
  Eigen::VectorXd standardized_targets_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double half_log_det_ = 0.0;
  double jitter_ = 0.0;
};

/// Grid member maximizing the log marginal likelihood; earliest index wins ties.
/// Members whose factorization fails are skipped.
inline KernelParams select_hyperparams(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const std::vector<KernelParams>& grid) {
  if (grid.empty()) throw MalformedConfigError("hyperparameter selection: empty grid");
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_index = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double lml;
    try {
      lml = GpSurrogate::fit(X, y, grid[i]).log_marginal_likelihood();
    } catch (const NumericalConditioningError&) {
      continue;
    }
    if (lml > best) {
      best = lml;
      best_index = i;
    }
  }
  if (best_index == grid.size())
    throw NumericalConditioningError("hyperparameter selection: no grid member factorized");
  return grid[best_index];
}

/// Lengthscales at {0.05, 0.1, 0.2, 0.5, 1.0} times the per-dimension input range,
/// unit signal variance (targets are standardized inside the surrogate) and a
/// 1e-6 noise floor.
inline std::vector<KernelParams> default_hyperparam_grid(const Eigen::MatrixXd& X) {
  if (X.rows() < 1) throw MalformedInputError("hyperparameter grid: empty inputs");
  Eigen::VectorXd range(X.cols());
  for (Eigen::Index d = 0; d < X.cols(); ++d) {
    const double r = X.col(d).maxCoeff() - X.col(d).minCoeff();
    range[d] = r > 1e-9 ? r : 1.0;
  }
  std::vector<KernelParams> grid;
  for (double factor : {0.05, 0.1, 0.2, 0.5, 1.0})
    grid.push_back(KernelParams{1.0, factor * range, 1e-6});
  return grid;
}

}  // namespace esgbo
