#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "esgbo/errors.hpp"
#include "esgbo/portfolio_weights.hpp"

namespace esgbo {

inline constexpr int kEsgCategoryCount = 14;
inline constexpr double kEsgWeightSumTolerance = 1e-9;

/// One firm's scorecard: category scores on the [0,10] scale plus
/// non-negative category weights summing to one.
class EsgScorecard {
 public:
  EsgScorecard(std::string firm_name, std::vector<double> category_scores,
               std::vector<double> category_weights)
      : firm_name_(std::move(firm_name)),
        scores_(std::move(category_scores)),
        weights_(std::move(category_weights)) {
    if (scores_.size() != kEsgCategoryCount)
      throw MalformedInputError("scorecard '" + firm_name_ + "': expected " +
                                std::to_string(kEsgCategoryCount) + " category scores, got " +
                                std::to_string(scores_.size()));
    if (weights_.size() != kEsgCategoryCount)
      throw MalformedInputError("scorecard '" + firm_name_ + "': expected " +
                                std::to_string(kEsgCategoryCount) + " category weights, got " +
                                std::to_string(weights_.size()));
    for (std::size_t k = 0; k < scores_.size(); ++k) {
      if (!std::isfinite(scores_[k]) || scores_[k] < 0.0 || scores_[k] > 10.0)
        throw MalformedInputError("scorecard '" + firm_name_ + "': category score " +
                                  std::to_string(scores_[k]) + " at index " + std::to_string(k) +
                                  " is outside the [0,10] range");
      if (!std::isfinite(weights_[k]) || weights_[k] < 0.0)
        throw MalformedInputError("scorecard '" + firm_name_ + "': negative category weight at index " +
                                  std::to_string(k));
    }
    double weight_sum = 0.0;
    for (double w : weights_) weight_sum += w;
    if (std::abs(weight_sum - 1.0) > kEsgWeightSumTolerance)
      throw MalformedInputError("scorecard '" + firm_name_ + "': category weights sum to " +
                                std::to_string(weight_sum) + ", expected 1");
  }

  static EsgScorecard with_uniform_weights(std::string firm_name,
                                           std::vector<double> category_scores) {
    return EsgScorecard(std::move(firm_name), std::move(category_scores),
                        std::vector<double>(kEsgCategoryCount, 1.0 / kEsgCategoryCount));
  }

  const std::string& firm_name() const { return firm_name_; }
  const std::vector<double>& category_scores() const { return scores_; }
  const std::vector<double>& category_weights() const { return weights_; }

 private:
  std::string firm_name_;
  std::vector<double> scores_;
  std::vector<double> weights_;
};

/// Firm-level total on the [0,10] scale.
class EsgTotal {
 public:
  EsgTotal(std::string firm_name, double total)
      : firm_name_(std::move(firm_name)), total_(total) {
    if (!std::isfinite(total_) || total_ < 0.0 || total_ > 10.0)
      throw MalformedInputError("ESG total for '" + firm_name_ + "' is " + std::to_string(total_) +
                                ", outside the [0,10] range");
  }

  const std::string& firm_name() const { return firm_name_; }
  double value() const { return total_; }

 private:
  std::string firm_name_;
  double total_;
};

inline EsgTotal scorecard_total(const EsgScorecard& card) {
  double total = 0.0;
  for (int k = 0; k < kEsgCategoryCount; ++k)
    total += card.category_weights()[k] * card.category_scores()[k];
  // convex combination of [0,10] scores; clamp shaves float overshoot at the edges
  return EsgTotal(card.firm_name(), std::clamp(total, 0.0, 10.0));
}

inline double portfolio_esg(const PortfolioWeights& weights, const std::vector<EsgTotal>& totals) {
  if (static_cast<std::size_t>(weights.size()) != totals.size())
    throw MalformedInputError("portfolio_esg: " + std::to_string(weights.size()) + " weights vs " +
                              std::to_string(totals.size()) + " ESG totals");
  double score = 0.0;
  for (std::size_t i = 0; i < totals.size(); ++i)
    score += weights[static_cast<Eigen::Index>(i)] * totals[i].value();
  return std::clamp(score, 0.0, 10.0);
}

}  // namespace esgbo
