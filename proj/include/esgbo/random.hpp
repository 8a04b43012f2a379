#pragma once

#include <random>

#include <Eigen/Core>

namespace esgbo {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline Eigen::VectorXd random_box_point(Rng& rng, Eigen::Index dim) {
  Eigen::VectorXd u(dim);
  for (Eigen::Index i = 0; i < dim; ++i) u[i] = uniform01(rng);
  return u;
}

}  // namespace esgbo
