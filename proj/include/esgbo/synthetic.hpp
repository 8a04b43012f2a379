#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "esgbo/errors.hpp"
#include "esgbo/format.hpp"
#include "esgbo/market_data.hpp"
#include "esgbo/random.hpp"

namespace esgbo {

namespace detail {

inline Eigen::VectorXd default_mean_returns() {
  Eigen::VectorXd means(3);
  means << -0.00051, -0.00022, 0.00036;
  return means;
}

// Daily vols of 0.3% / 0.5% / 1.2% with pairwise correlation 0.3. Chosen so the
// Sharpe factor meaningfully separates the three assets on the default problem.
inline Eigen::MatrixXd default_return_covariance() {
  Eigen::VectorXd vol(3);
  vol << 0.003, 0.005, 0.012;
  Eigen::MatrixXd cov(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) cov(i, j) = (i == j ? 1.0 : 0.3) * vol[i] * vol[j];
  return cov;
}

inline std::vector<std::string> business_days(const std::string& start_date, int count) {
  if (!is_iso_date(start_date))
    throw MalformedConfigError("synthetic data: '" + start_date + "' is not a valid ISO-8601 date");
  using namespace std::chrono;
  const int y = std::stoi(start_date.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(start_date.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(std::stoi(start_date.substr(8, 2)));
  sys_days cursor{year_month_day{year{y}, month{m}, day{d}}};

  std::vector<std::string> dates;
  dates.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(dates.size()) < count) {
    const weekday wd{cursor};
    if (wd != Saturday && wd != Sunday) {
      const year_month_day ymd{cursor};
      char buffer[16];
      std::snprintf(buffer, sizeof(buffer), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                    static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
      dates.emplace_back(buffer);
    }
    cursor += days{1};
  }
  return dates;
}

}  // namespace detail

struct SyntheticDataConfig {
  std::vector<std::string> asset_names{"Endesa", "Iberdrola", "Repsol"};
  std::string start_date = "2021-03-15";
  int days = 252;
  Eigen::VectorXd mean_returns = detail::default_mean_returns();
  Eigen::MatrixXd covariance = detail::default_return_covariance();
  Eigen::VectorXd initial_prices = Eigen::VectorXd::Constant(3, 100.0);
  std::uint64_t seed = 20210315;
};

struct SyntheticData {
  std::vector<std::string> asset_names;
  std::vector<std::string> dates;     // one per price row
  Eigen::MatrixXd prices;             // days x assets
  Eigen::VectorXd realized_mean_returns;
  Eigen::MatrixXd realized_covariance;
};

inline void validate(const SyntheticDataConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.asset_names.size());
  if (n == 0) throw MalformedConfigError("synthetic data: no assets");
  // two returns are the minimum for a sample covariance
  if (cfg.days < 3) throw MalformedConfigError("synthetic data: at least 3 days required");
  if (cfg.mean_returns.size() != n || cfg.initial_prices.size() != n ||
      cfg.covariance.rows() != n || cfg.covariance.cols() != n)
    throw MalformedConfigError("synthetic data: asset_names, mean_returns, covariance and "
                               "initial_prices disagree on the number of assets");
  if (!cfg.mean_returns.allFinite() || !cfg.covariance.allFinite() ||
      !cfg.initial_prices.allFinite())
    throw MalformedConfigError("synthetic data: non-finite entries");
  if (cfg.initial_prices.minCoeff() <= 0.0)
    throw MalformedConfigError("synthetic data: initial prices must be positive");
  if ((cfg.covariance - cfg.covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw MalformedConfigError("synthetic data: covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cfg.covariance, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success || solver.eigenvalues().minCoeff() < -1e-12)
    throw MalformedConfigError("synthetic data: covariance is not positive semidefinite");
}

/// Gaussian price paths whose sample mean returns are pinned to the targets.
///
/// Draws correlated daily returns, shifts each asset so the sample mean equals its
/// target, and compounds prices. Two refinement passes repeat the shift on returns
/// recomputed from the rounded prices, so re-ingesting the emitted CSV recovers the
/// target means up to a few double ulps. The covariance stays a free (sampled) knob.
inline SyntheticData generate_price_data(const SyntheticDataConfig& cfg) {
  validate(cfg);
  const auto n = static_cast<Eigen::Index>(cfg.asset_names.size());
  const Eigen::Index steps = cfg.days - 1;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cfg.covariance);
  const Eigen::MatrixXd transform =
      solver.eigenvectors() *
      solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  Rng rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd returns(steps, n);
  for (Eigen::Index t = 0; t < steps; ++t) {
    Eigen::VectorXd z(n);
    for (Eigen::Index j = 0; j < n; ++j) z[j] = gauss(rng);
    returns.row(t) = (transform * z).transpose();
  }

  Eigen::MatrixXd prices(cfg.days, n);
  const auto rebuild_prices = [&]() {
    prices.row(0) = cfg.initial_prices.transpose();
    for (Eigen::Index t = 0; t < steps; ++t) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double next = prices(t, j) * (1.0 + returns(t, j));
        if (!(next > 0.0))
          throw MalformedConfigError("synthetic data: returns drove a price non-positive; "
                                     "use a smaller covariance");
        prices(t + 1, j) = next;
      }
    }
  };

  constexpr int kRefinementPasses = 3;
  for (int pass = 0; pass < kRefinementPasses; ++pass) {
    for (Eigen::Index j = 0; j < n; ++j)
      returns.col(j).array() += cfg.mean_returns[j] - returns.col(j).mean();
    rebuild_prices();
    // next pass adjusts the returns an ingester would actually see
    for (Eigen::Index t = 0; t < steps; ++t)
      for (Eigen::Index j = 0; j < n; ++j) returns(t, j) = prices(t + 1, j) / prices(t, j) - 1.0;
  }

  SyntheticData data;
  data.asset_names = cfg.asset_names;
  data.dates = detail::business_days(cfg.start_date, cfg.days);
  data.prices = prices;
  std::vector<std::vector<double>> per_asset(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    per_asset[static_cast<std::size_t>(j)].assign(returns.col(j).data(),
                                                  returns.col(j).data() + steps);
  }
  const ReturnStats stats = estimate_stats(cfg.asset_names, per_asset);
  data.realized_mean_returns = stats.mean_returns();
  data.realized_covariance = stats.covariance();
  return data;
}

/// `date,asset,price` rows, date-major, full double precision, LF line endings.
inline void write_price_csv(const SyntheticData& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "date,asset,price\n";
  for (Eigen::Index t = 0; t < data.prices.rows(); ++t)
    for (Eigen::Index j = 0; j < data.prices.cols(); ++j)
      out << data.dates[static_cast<std::size_t>(t)] << ','
          << data.asset_names[static_cast<std::size_t>(j)] << ','
          << detail::g17(data.prices(t, j)) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing price CSV '" + path + "'");
}

}  // namespace esgbo
