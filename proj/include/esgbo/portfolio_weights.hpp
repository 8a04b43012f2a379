#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "esgbo/errors.hpp"

namespace esgbo {

inline constexpr double kSimplexSumTolerance = 1e-9;

/// A point on the simplex: entries in [0,1] summing to one.
class PortfolioWeights {
 public:
  explicit PortfolioWeights(Eigen::VectorXd w) : w_(std::move(w)) {
    if (w_.size() == 0) throw MalformedInputError("portfolio weights: empty vector");
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
      if (!std::isfinite(w_[i]) || w_[i] < 0.0 || w_[i] > 1.0)
        throw MalformedInputError("portfolio weights: entry " + std::to_string(i) +
                                  " = " + std::to_string(w_[i]) + " is outside [0,1]");
    }
    if (std::abs(w_.sum() - 1.0) > kSimplexSumTolerance)
      throw MalformedInputError("portfolio weights: sum " + std::to_string(w_.sum()) +
                                " is not 1 within tolerance");
  }

  const Eigen::VectorXd& vector() const { return w_; }
  Eigen::Index size() const { return w_.size(); }
  double operator[](Eigen::Index i) const { return w_[i]; }

 private:
  Eigen::VectorXd w_;
};

}  // namespace esgbo
