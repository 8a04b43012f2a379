#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "esgbo/acquisition.hpp"
#include "esgbo/errors.hpp"
#include "esgbo/gp.hpp"
#include "esgbo/portfolio_weights.hpp"
#include "esgbo/random.hpp"

namespace esgbo {

struct RunConfig {
  int budget = 25;
  int n_assets = 0;
  AcquisitionSpec acquisition{};
  std::uint64_t seed = 1;
  int n_acq_candidates = 1000;
  // 0 means the random-search baseline uses `budget` draws; a positive value
  // overrides its draw count for unequal-budget comparisons.
  int random_search_draws = 0;
};

inline void validate(const RunConfig& cfg) {
  if (cfg.budget < 1) throw MalformedConfigError("run: budget must be at least 1");
  if (cfg.n_assets < 2) throw MalformedConfigError("run: at least 2 assets required");
  if (cfg.n_acq_candidates < 1)
    throw MalformedConfigError("run: n_acq_candidates must be positive");
  if (cfg.random_search_draws < 0)
    throw MalformedConfigError("run: random_search_draws must be non-negative");
  validate(cfg.acquisition);
}

/// Black-box evaluator over the unit box. Must be safe to call from concurrent
/// repetitions.
using BoxObjective = std::function<double(const Eigen::VectorXd&)>;

/// Normalizes a box point onto the simplex; the all-zeros corner falls back to
/// uniform weights.
inline PortfolioWeights box_to_simplex(const Eigen::VectorXd& u) {
  const auto n = u.size();
  if (n == 0) throw MalformedInputError("box_to_simplex: empty point");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(u[i] >= 0.0 && u[i] <= 1.0))
      throw MalformedInputError("box_to_simplex: point is outside the unit box");
  const double total = u.sum();
  if (total < 1e-12)
    return PortfolioWeights(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
  return PortfolioWeights(u / total);
}

struct Evaluation {
  Eigen::VectorXd box_point;
  Eigen::VectorXd weights;
  double fitness = 0.0;
};

struct RunTrace {
  std::vector<Evaluation> evaluations;
  std::vector<double> best_so_far;
  std::size_t best_index = 0;

  void record(Eigen::VectorXd box_point, Eigen::VectorXd weights, double fitness) {
    evaluations.push_back({std::move(box_point), std::move(weights), fitness});
    if (best_so_far.empty() || fitness > best_so_far.back()) {
      best_index = evaluations.size() - 1;
      best_so_far.push_back(fitness);
    } else {
      best_so_far.push_back(best_so_far.back());
    }
  }

  const Evaluation& best() const {
    if (evaluations.empty()) throw MalformedInputError("trace: no evaluations");
    return evaluations[best_index];
  }

  PortfolioWeights recommendation() const { return PortfolioWeights(best().weights); }
};

/// A run failure carrying everything evaluated before the failing call.
class RunAbortedError : public std::runtime_error {
 public:
  RunAbortedError(const std::string& message, RunTrace partial)
      : std::runtime_error(message), partial_trace(std::move(partial)) {}

  RunTrace partial_trace;
};

namespace detail {

inline double evaluate_or_abort(const BoxObjective& objective, const Eigen::VectorXd& u,
                                const RunTrace& trace, int iteration) {
  try {
    return objective(u);
  } catch (const std::exception& e) {
    throw RunAbortedError("objective evaluation failed at iteration " +
                              std::to_string(iteration + 1) + ": " + e.what(),
                          trace);
  }
}

}  // namespace detail

/// Sequential model-based optimization: one random evaluation, then fit the
/// surrogate on everything seen and evaluate wherever the acquisition peaks.
/// Exactly `budget` objective calls; fully determined by (config, seed).
inline RunTrace bo_run(const BoxObjective& objective, const RunConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  RunTrace trace;
  Eigen::MatrixXd X(cfg.budget, cfg.n_assets);
  Eigen::VectorXd y(cfg.budget);

  for (int t = 0; t < cfg.budget; ++t) {
    Eigen::VectorXd u;
    if (t == 0) {
      u = random_box_point(rng, cfg.n_assets);
    } else {
      const Eigen::MatrixXd seen_X = X.topRows(t);
      const Eigen::VectorXd seen_y = y.head(t);
      const KernelParams params =
          select_hyperparams(seen_X, seen_y, default_hyperparam_grid(seen_X));
      const GpSurrogate gp = GpSurrogate::fit(seen_X, seen_y, params);
      u = maximize_acquisition(gp, cfg.acquisition, trace.best_so_far.back(), cfg.n_assets, rng,
                               cfg.n_acq_candidates);
    }
    const PortfolioWeights weights = box_to_simplex(u);
    const double value = detail::evaluate_or_abort(objective, u, trace, t);
    X.row(t) = u.transpose();
    y[t] = value;
    trace.record(std::move(u), weights.vector(), value);
  }
  return trace;
}

/// Equal-interface baseline: independent uniform box draws.
inline RunTrace random_search_run(const BoxObjective& objective, const RunConfig& cfg) {
  validate(cfg);
  const int draws = cfg.random_search_draws > 0 ? cfg.random_search_draws : cfg.budget;
  Rng rng(cfg.seed);
  RunTrace trace;
  for (int t = 0; t < draws; ++t) {
    Eigen::VectorXd u = random_box_point(rng, cfg.n_assets);
    const PortfolioWeights weights = box_to_simplex(u);
    const double value = detail::evaluate_or_abort(objective, u, trace, t);
    trace.record(std::move(u), weights.vector(), value);
  }
  return trace;
}

}  // namespace esgbo
