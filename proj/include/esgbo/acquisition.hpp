#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "esgbo/errors.hpp"
#include "esgbo/gp.hpp"
#include "esgbo/random.hpp"

namespace esgbo {

enum class AcquisitionKind { kExpectedImprovement, kUpperConfidenceBound };

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::kUpperConfidenceBound;
  double ei_epsilon = 0.01;
  double ucb_beta = 2.0;
};

inline void validate(const AcquisitionSpec& spec) {
  if (!(spec.ei_epsilon >= 0.0) || !std::isfinite(spec.ei_epsilon))
    throw MalformedConfigError("acquisition: ei_epsilon must be non-negative");
  if (!(spec.ucb_beta > 0.0) || !std::isfinite(spec.ucb_beta))
    throw MalformedConfigError("acquisition: ucb_beta must be positive");
}

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// E[max(f - incumbent - epsilon, 0)] under f ~ Normal(mean, variance).
inline double expected_improvement(const Prediction& pred, double incumbent, double epsilon) {
  const double gain = pred.mean - incumbent - epsilon;
  const double s = std::sqrt(std::max(pred.variance, 0.0));
  if (s == 0.0) return std::max(gain, 0.0);
  const double z = gain / s;
  return std::max(gain * normal_cdf(z) + s * normal_pdf(z), 0.0);
}

inline double upper_confidence_bound(const Prediction& pred, double beta) {
  return pred.mean + beta * std::sqrt(std::max(pred.variance, 0.0));
}

inline double acquisition_value(const GpSurrogate& gp, const Eigen::VectorXd& u,
                                const AcquisitionSpec& spec, double incumbent) {
  const Prediction pred = gp.predict(u);
  if (spec.kind == AcquisitionKind::kExpectedImprovement)
    return expected_improvement(pred, incumbent, spec.ei_epsilon);
  return upper_confidence_bound(pred, spec.ucb_beta);
}

namespace detail {

// Coordinate-wise step-halving hill climb clamped to the unit box.
// Accepts only strict improvements, so it terminates and ties never move the point.
template <typename F>
void hill_climb(const F& objective, Eigen::VectorXd& point, double& value) {
  constexpr double kInitialStep = 0.1;
  constexpr int kHalvings = 8;
  constexpr int kMaxSweepsPerStep = 32;

  double step = kInitialStep;
  for (int level = 0; level <= kHalvings; ++level) {
    for (int sweep = 0; sweep < kMaxSweepsPerStep; ++sweep) {
      bool improved = false;
      for (Eigen::Index d = 0; d < point.size(); ++d) {
        for (double direction : {1.0, -1.0}) {
          const double original = point[d];
          const double moved = std::clamp(original + direction * step, 0.0, 1.0);
          if (moved == original) continue;
          point[d] = moved;
          const double candidate = objective(point);
          if (candidate > value) {
            value = candidate;
            improved = true;
          } else {
            point[d] = original;
          }
        }
      }
      if (!improved) break;
    }
    step *= 0.5;
  }
}

}  // namespace detail

/// Multi-start maximization over [0,1]^D: n_candidates uniform draws, then local
/// hill climbs from the best five. Deterministic given the generator state; ties
/// resolve to the lowest candidate index.
inline Eigen::VectorXd maximize_acquisition(const GpSurrogate& gp, const AcquisitionSpec& spec,
                                            double incumbent, Eigen::Index box_dim, Rng& rng,
                                            int n_candidates) {
  validate(spec);
  if (n_candidates < 1)
    throw MalformedConfigError("maximize_acquisition: n_candidates must be positive");
  if (box_dim != gp.dimension())
    throw MalformedInputError("maximize_acquisition: box dimension does not match the surrogate");

  const auto acquisition = [&](const Eigen::VectorXd& u) {
    return acquisition_value(gp, u, spec, incumbent);
  };

  std::vector<Eigen::VectorXd> candidates(static_cast<std::size_t>(n_candidates));
  std::vector<double> values(static_cast<std::size_t>(n_candidates));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i] = random_box_point(rng, box_dim);
    values[i] = acquisition(candidates[i]);
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  constexpr std::size_t kRefineStarts = 5;
  Eigen::VectorXd best_point = candidates[order[0]];
  double best_value = values[order[0]];
  for (std::size_t rank = 0; rank < std::min(kRefineStarts, order.size()); ++rank) {
    Eigen::VectorXd point = candidates[order[rank]];
    double value = values[order[rank]];
    detail::hill_climb(acquisition, point, value);
    if (value > best_value) {
      best_value = value;
      best_point = point;
    }
  }
  return best_point;
}

}  // namespace esgbo
