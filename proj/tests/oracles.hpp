// Test-only reference implementations, kept independent of the library code
// paths they check: plain loops and dense inverses instead of factorizations.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "esgbo/gp.hpp"

namespace oracle {

struct Moments {
  std::vector<double> means;
  std::vector<std::vector<double>> covariance;
};

inline std::vector<double> simple_returns(const std::vector<double>& prices) {
  std::vector<double> out;
  for (std::size_t t = 0; t + 1 < prices.size(); ++t)
    out.push_back(prices[t + 1] / prices[t] - 1.0);
  return out;
}

inline Moments sample_moments(const std::vector<std::vector<double>>& returns) {
  const std::size_t n = returns.size();
  const std::size_t T = returns.front().size();
  Moments m;
  m.means.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) m.means[i] += returns[i][t];
    m.means[i] /= static_cast<double>(T);
  }
  m.covariance.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < T; ++t)
        acc += (returns[i][t] - m.means[i]) * (returns[j][t] - m.means[j]);
      m.covariance[i][j] = acc / static_cast<double>(T - 1);
    }
  return m;
}

inline double squared_exponential(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                  const esgbo::KernelParams& params) {
  double q = 0.0;
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    const double u = (a[d] - b[d]) / params.lengthscales[d];
    q += u * u;
  }
  return params.signal_variance * std::exp(-0.5 * q);
}

// Predictive mean and variance through an explicit dense inverse, with the same
// target standardization contract as the surrogate.
inline esgbo::Prediction dense_gp_predict(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                          const esgbo::KernelParams& params,
                                          const Eigen::VectorXd& xstar) {
  const Eigen::Index t = X.rows();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < t; ++i) mean += y[i];
  mean /= static_cast<double>(t);
  double scale = 0.0;
  if (t >= 2) {
    for (Eigen::Index i = 0; i < t; ++i) scale += (y[i] - mean) * (y[i] - mean);
    scale = std::sqrt(scale / static_cast<double>(t - 1));
  }
  if (!(scale > 1e-12)) scale = 1.0;
  Eigen::VectorXd ystd(t);
  for (Eigen::Index i = 0; i < t; ++i) ystd[i] = (y[i] - mean) / scale;

  Eigen::MatrixXd A(t, t);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < t; ++j)
      A(i, j) = squared_exponential(X.row(i).transpose(), X.row(j).transpose(), params) +
                (i == j ? params.noise_variance : 0.0);
  const Eigen::MatrixXd A_inv = A.inverse();

  Eigen::VectorXd kstar(t);
  for (Eigen::Index i = 0; i < t; ++i)
    kstar[i] = squared_exponential(X.row(i).transpose(), xstar, params);

  const double mu = kstar.dot(A_inv * ystd);
  const double var = squared_exponential(xstar, xstar, params) - kstar.dot(A_inv * kstar);
  return {mean + scale * mu, scale * scale * var};
}

// Log marginal likelihood of the standardized targets via explicit determinant
// and inverse.
inline double dense_log_marginal_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                            const esgbo::KernelParams& params) {
  const Eigen::Index t = X.rows();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < t; ++i) mean += y[i];
  mean /= static_cast<double>(t);
  double scale = 0.0;
  if (t >= 2) {
    for (Eigen::Index i = 0; i < t; ++i) scale += (y[i] - mean) * (y[i] - mean);
    scale = std::sqrt(scale / static_cast<double>(t - 1));
  }
  if (!(scale > 1e-12)) scale = 1.0;
  Eigen::VectorXd ystd(t);
  for (Eigen::Index i = 0; i < t; ++i) ystd[i] = (y[i] - mean) / scale;

  Eigen::MatrixXd A(t, t);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < t; ++j)
      A(i, j) = squared_exponential(X.row(i).transpose(), X.row(j).transpose(), params) +
                (i == j ? params.noise_variance : 0.0);
  const double log_det = std::log(A.determinant());
  const double quad = ystd.dot(A.inverse() * ystd);
  return -0.5 * quad - 0.5 * log_det -
         0.5 * static_cast<double>(t) * std::log(2.0 * std::numbers::pi);
}

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

// E[max(f - incumbent - epsilon, 0)] with f ~ Normal(mean, sd^2) by simulation.
inline MonteCarloEstimate mc_expected_improvement(double mean, double sd, double incumbent,
                                                  double epsilon, int n_draws,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n_draws; ++i) {
    const double f = mean + sd * gauss(rng);
    const double gain = std::max(f - incumbent - epsilon, 0.0);
    sum += gain;
    sum_sq += gain * gain;
  }
  const double n = static_cast<double>(n_draws);
  const double estimate = sum / n;
  const double variance = std::max(sum_sq / n - estimate * estimate, 0.0);
  return {estimate, std::sqrt(variance / n)};
}

}  // namespace oracle
