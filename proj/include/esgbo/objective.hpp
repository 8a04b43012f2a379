#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "esgbo/errors.hpp"
#include "esgbo/esg.hpp"
#include "esgbo/market_data.hpp"
#include "esgbo/portfolio_weights.hpp"

namespace esgbo {

struct ObjectiveConfig {
  double risk_free = 0.012;
  double sharpe_min = -60.0;
  double sharpe_max = 3.0;
  double esg_min = 0.0;
  double esg_max = 10.0;
  bool esg_log_transform = false;
};

inline void validate(const ObjectiveConfig& cfg) {
  if (!std::isfinite(cfg.risk_free)) throw MalformedConfigError("objective: risk_free is not finite");
  if (!(cfg.sharpe_min < cfg.sharpe_max))
    throw MalformedConfigError("objective: sharpe_min must be below sharpe_max");
  if (!(cfg.esg_min < cfg.esg_max))
    throw MalformedConfigError("objective: esg_min must be below esg_max");
}

/// Affine map of [lo,hi] onto [0,1]; out-of-range values clamp instead of erroring
/// because the bounds are sample estimates that can be exceeded off-sample.
inline double normalize(double value, double lo, double hi) {
  if (!(lo < hi)) throw MalformedConfigError("normalize: lower bound must be below upper bound");
  return std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
}

/// Excess portfolio return over its standard deviation. The weight vector is not
/// required to lie on the simplex here; gradient checks perturb it freely.
inline double sharpe_ratio(const Eigen::VectorXd& w, const ReturnStats& stats, double risk_free) {
  if (w.size() != stats.n_assets())
    throw MalformedInputError("sharpe_ratio: weight dimension does not match stats");
  const double variance = w.dot(stats.covariance() * w);
  if (variance <= 0.0)
    throw DegenerateRiskError("sharpe_ratio: zero portfolio variance along the given weights");
  return (stats.mean_returns().dot(w) - risk_free) / std::sqrt(variance);
}

inline double sharpe_ratio(const PortfolioWeights& weights, const ReturnStats& stats,
                           double risk_free) {
  return sharpe_ratio(weights.vector(), stats, risk_free);
}

inline Eigen::VectorXd sharpe_ratio_gradient(const Eigen::VectorXd& w, const ReturnStats& stats,
                                             double risk_free) {
  if (w.size() != stats.n_assets())
    throw MalformedInputError("sharpe_ratio_gradient: weight dimension does not match stats");
  const Eigen::VectorXd cov_w = stats.covariance() * w;
  const double variance = w.dot(cov_w);
  if (variance <= 0.0)
    throw DegenerateRiskError("sharpe_ratio_gradient: zero portfolio variance");
  const double sigma = std::sqrt(variance);
  const double excess = stats.mean_returns().dot(w) - risk_free;
  return stats.mean_returns() / sigma - cov_w * (excess / (sigma * variance));
}

/// Normalized Sharpe plus (optionally log-warped) normalized portfolio ESG, in [0,2].
/// The log warp g(u) = ln(1 + u(e-1)) maps [0,1] onto [0,1], concave, so low ESG
/// scores are penalized much harder than high ones.
inline double fitness(const PortfolioWeights& weights, const ReturnStats& stats,
                      const std::vector<EsgTotal>& esg_totals, const ObjectiveConfig& cfg) {
  validate(cfg);
  const double sharpe_factor =
      normalize(sharpe_ratio(weights, stats, cfg.risk_free), cfg.sharpe_min, cfg.sharpe_max);
  double esg_factor = normalize(portfolio_esg(weights, esg_totals), cfg.esg_min, cfg.esg_max);
  if (cfg.esg_log_transform) esg_factor = std::log1p(esg_factor * (std::numbers::e - 1.0));
  return sharpe_factor + esg_factor;
}

}  // namespace esgbo
