#include "esgbo/objective.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace {

using esgbo::DegenerateRiskError;
using esgbo::EsgTotal;
using esgbo::fitness;
using esgbo::MalformedConfigError;
using esgbo::normalize;
using esgbo::ObjectiveConfig;
using esgbo::PortfolioWeights;
using esgbo::ReturnStats;
using esgbo::sharpe_ratio;

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

ReturnStats single_asset(double mean, double variance) {
  Eigen::VectorXd m(1);
  m << mean;
  Eigen::MatrixXd c(1, 1);
  c << variance;
  return ReturnStats({"a"}, m, c);
}

// Random simplex point with strictly positive entries.
PortfolioWeights random_weights(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = unit(rng) + 1e-3;
  return PortfolioWeights(w / w.sum());
}

ReturnStats random_stats(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.01 * gauss(rng);
  Eigen::MatrixXd cov = a * a.transpose();
  cov.diagonal().array() += 1e-6;  // keep the quadratic form positive
  Eigen::VectorXd means(n);
  for (int i = 0; i < n; ++i) means[i] = 0.001 * gauss(rng);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
  return ReturnStats(names, means, cov);
}

TEST(Normalize, FixedPoints) {
  EXPECT_EQ(normalize(3.0, -60.0, 3.0), 1.0);
  EXPECT_EQ(normalize(-60.0, -60.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize(8.7, 0.0, 10.0), 0.87);
}

TEST(Normalize, ClampsOutOfRange) {
  EXPECT_EQ(normalize(5.0, -60.0, 3.0), 1.0);
  EXPECT_EQ(normalize(-100.0, -60.0, 3.0), 0.0);
  EXPECT_NEAR(normalize(-28.5, -60.0, 3.0), 0.5, 1e-15);
}

TEST(Normalize, RejectsInvertedBounds) {
  EXPECT_THROW(normalize(0.0, 1.0, 1.0), MalformedConfigError);
  EXPECT_THROW(normalize(0.0, 2.0, 1.0), MalformedConfigError);
}

TEST(SharpeRatio, SingleAsset) {
  const ReturnStats stats = single_asset(0.05, 0.04);
  EXPECT_NEAR(sharpe_ratio(PortfolioWeights(vec({1.0})), stats, 0.01), 0.2, 1e-15);
}

TEST(SharpeRatio, ZeroExcessReturn) {
  std::mt19937_64 rng(3);
  const ReturnStats stats = random_stats(rng, 3);
  const double r_f = 0.004;
  Eigen::VectorXd means = Eigen::VectorXd::Constant(3, r_f);
  const ReturnStats flat(stats.asset_names(), means, stats.covariance());
  EXPECT_NEAR(sharpe_ratio(random_weights(rng, 3), flat, r_f), 0.0, 1e-12);
}

TEST(SharpeRatio, TwoUncorrelatedAssets) {
  Eigen::VectorXd means(2);
  means << 0.04, 0.04;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = cov(1, 1) = 0.01;
  const ReturnStats stats({"a", "b"}, means, cov);
  EXPECT_NEAR(sharpe_ratio(PortfolioWeights(vec({0.5, 0.5})), stats, 0.0),
              0.04 / std::sqrt(0.005), 1e-12);
}

TEST(SharpeRatio, ZeroVarianceIsAnError) {
  Eigen::VectorXd means(2);
  means << 0.01, 0.02;
  const ReturnStats stats({"a", "b"}, means, Eigen::MatrixXd::Zero(2, 2));
  EXPECT_THROW(sharpe_ratio(PortfolioWeights(vec({0.5, 0.5})), stats, 0.0),
               DegenerateRiskError);
}

TEST(SharpeRatio, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const ReturnStats stats = random_stats(rng, n);
    const Eigen::VectorXd w = random_weights(rng, n).vector();
    const double r_f = 0.002;

    const Eigen::VectorXd gradient = esgbo::sharpe_ratio_gradient(w, stats, r_f);
    const double step = 1e-6;
    for (int d = 0; d < n; ++d) {
      Eigen::VectorXd up = w, down = w;
      up[d] += step;
      down[d] -= step;
      const double fd =
          (sharpe_ratio(up, stats, r_f) - sharpe_ratio(down, stats, r_f)) / (2.0 * step);
      const double scale = std::max(std::abs(fd), 1e-8);
      EXPECT_LT(std::abs(gradient[d] - fd) / scale, 1e-5)
          << "trial " << trial << " coordinate " << d;
    }
  }
}

TEST(Fitness, ExtremesHitTheBounds) {
  ObjectiveConfig cfg;
  cfg.risk_free = 0.0;
  cfg.sharpe_min = -1.0;
  cfg.sharpe_max = 1.0;

  // one asset, huge positive excess return: normalized Sharpe clamps to 1
  const ReturnStats good = single_asset(10.0, 0.0001);
  const std::vector<EsgTotal> top{{"a", 10.0}};
  EXPECT_DOUBLE_EQ(fitness(PortfolioWeights(vec({1.0})), good, top, cfg), 2.0);

  const ReturnStats bad = single_asset(-10.0, 0.0001);
  const std::vector<EsgTotal> bottom{{"a", 0.0}};
  EXPECT_DOUBLE_EQ(fitness(PortfolioWeights(vec({1.0})), bad, bottom, cfg), 0.0);
}

TEST(Fitness, MatchesIndependentRecomposition) {
  Eigen::VectorXd means(3);
  means << -0.00051, -0.00022, 0.00036;
  Eigen::MatrixXd cov(3, 3);
  cov << 9e-6, 4.5e-6, 1.08e-5,
         4.5e-6, 2.5e-5, 1.8e-5,
         1.08e-5, 1.8e-5, 1.44e-4;
  const ReturnStats stats({"e", "i", "r"}, means, cov);
  const std::vector<EsgTotal> totals{{"e", 8.7}, {"i", 8.97}, {"r", 7.32}};
  const PortfolioWeights w(vec({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  ObjectiveConfig cfg;  // defaults: r_f 0.012, Sharpe in [-60, 3], ESG in [0, 10]

  // factor-by-factor recomposition with plain arithmetic
  double excess = 0.0;
  for (int i = 0; i < 3; ++i) excess += means[i] / 3.0;
  excess -= cfg.risk_free;
  double variance = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) variance += cov(i, j) / 9.0;
  const double sharpe = excess / std::sqrt(variance);
  const double expected_sharpe_factor = (sharpe - (-60.0)) / 63.0;
  const double expected_esg_factor = (8.7 / 3.0 + 8.97 / 3.0 + 7.32 / 3.0) / 10.0;

  EXPECT_NEAR(fitness(w, stats, totals, cfg), expected_sharpe_factor + expected_esg_factor,
              1e-12);
}

TEST(Fitness, LogTransformAgreesAtTheEdges) {
  ObjectiveConfig plain;
  plain.risk_free = 0.0;
  ObjectiveConfig warped = plain;
  warped.esg_log_transform = true;

  const ReturnStats stats = single_asset(0.001, 0.0001);
  const PortfolioWeights w(vec({1.0}));
  for (double total : {0.0, 10.0}) {
    const std::vector<EsgTotal> totals{{"a", total}};
    EXPECT_NEAR(fitness(w, stats, totals, plain), fitness(w, stats, totals, warped), 1e-12);
  }
  // strictly concave in between: warped value exceeds the identity mapping
  const std::vector<EsgTotal> mid{{"a", 5.0}};
  EXPECT_GT(fitness(w, stats, mid, warped), fitness(w, stats, mid, plain));
  EXPECT_NEAR(fitness(w, stats, mid, warped) - fitness(w, stats, mid, plain),
              std::log1p(0.5 * (std::numbers::e - 1.0)) - 0.5, 1e-12);
}

TEST(Fitness, StaysInBoundsOnRandomInputs) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const ReturnStats stats = random_stats(rng, n);
    std::vector<EsgTotal> totals;
    for (int i = 0; i < n; ++i) totals.emplace_back("a" + std::to_string(i), 10.0 * unit(rng));
    ObjectiveConfig cfg;
    cfg.risk_free = 0.02 * unit(rng) - 0.01;
    cfg.sharpe_min = -5.0 - 60.0 * unit(rng);
    cfg.sharpe_max = 3.0 * unit(rng) + 0.1;
    cfg.esg_log_transform = trial % 2 == 0;

    const double value = fitness(random_weights(rng, n), stats, totals, cfg);
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, 2.0);
  }
}

TEST(Fitness, PermutationInvariant) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3;
    const ReturnStats stats = random_stats(rng, n);
    const PortfolioWeights w = random_weights(rng, n);
    std::vector<EsgTotal> totals;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < n; ++i) totals.emplace_back("a" + std::to_string(i), 10.0 * unit(rng));
    ObjectiveConfig cfg;

    const std::vector<int> perm{2, 0, 1};
    Eigen::VectorXd pw(n), pm(n);
    Eigen::MatrixXd pc(n, n);
    std::vector<EsgTotal> pt;
    std::vector<std::string> pn;
    for (int i = 0; i < n; ++i) {
      pw[i] = w[perm[static_cast<std::size_t>(i)]];
      pm[i] = stats.mean_returns()[perm[static_cast<std::size_t>(i)]];
      pt.push_back(totals[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
      pn.push_back(stats.asset_names()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
      for (int j = 0; j < n; ++j)
        pc(i, j) = stats.covariance()(perm[static_cast<std::size_t>(i)],
                                      perm[static_cast<std::size_t>(j)]);
    }
    const double base = fitness(w, stats, totals, cfg);
    const double permuted = fitness(PortfolioWeights(pw), ReturnStats(pn, pm, pc), pt, cfg);
    EXPECT_NEAR(base, permuted, 1e-12);
  }
}

TEST(Fitness, MonotoneInEsgTotals) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3;
    const ReturnStats stats = random_stats(rng, n);
    const PortfolioWeights w = random_weights(rng, n);
    std::vector<EsgTotal> totals;
    for (int i = 0; i < n; ++i) totals.emplace_back("a" + std::to_string(i), 9.0 * unit(rng));
    ObjectiveConfig cfg;
    cfg.esg_log_transform = trial % 2 == 0;

    const double base = fitness(w, stats, totals, cfg);
    auto bumped = totals;
    const std::size_t k = rng() % n;
    bumped[k] = EsgTotal(bumped[k].firm_name(), std::min(10.0, bumped[k].value() + unit(rng)));
    EXPECT_GE(fitness(w, stats, bumped, cfg), base - 1e-12);
  }
}

}  // namespace
