#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "esgbo/errors.hpp"

namespace esgbo {

namespace detail {

inline bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (s[i] < '0' || s[i] > '9') return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  static const int days_in_month[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = days_in_month[month - 1];
  if (month == 2) {
    const int year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (leap) limit = 29;
  }
  return day <= limit;
}

}  // namespace detail

/// Dated price history of one asset. ISO dates, strictly increasing.
class PriceSeries {
 public:
  PriceSeries(std::string asset_name, std::vector<std::string> dates, std::vector<double> prices)
      : asset_name_(std::move(asset_name)), dates_(std::move(dates)), prices_(std::move(prices)) {
    if (dates_.size() != prices_.size())
      throw MalformedInputError("price series '" + asset_name_ + "': " +
                                std::to_string(dates_.size()) + " dates vs " +
                                std::to_string(prices_.size()) + " prices");
    if (prices_.size() < 2)
      throw MalformedInputError("price series '" + asset_name_ +
                                "': at least 2 observations required, got " +
                                std::to_string(prices_.size()));
    for (std::size_t i = 0; i < prices_.size(); ++i) {
      if (!detail::is_iso_date(dates_[i]))
        throw MalformedInputError("price series '" + asset_name_ + "': '" + dates_[i] +
                                  "' is not a valid ISO-8601 date");
      if (!std::isfinite(prices_[i]) || prices_[i] <= 0.0)
        throw MalformedInputError("price series '" + asset_name_ + "': non-positive price " +
                                  std::to_string(prices_[i]) + " on " + dates_[i]);
      // ISO dates compare chronologically as strings
      if (i > 0 && !(dates_[i - 1] < dates_[i]))
        throw MalformedInputError("price series '" + asset_name_ +
                                  "': dates not strictly increasing at " + dates_[i]);
    }
  }

  const std::string& asset_name() const { return asset_name_; }
  const std::vector<std::string>& dates() const { return dates_; }
  const std::vector<double>& prices() const { return prices_; }
  std::size_t size() const { return prices_.size(); }

 private:
  std::string asset_name_;
  std::vector<std::string> dates_;
  std::vector<double> prices_;
};

/// Per-asset mean simple returns and their sample covariance.
class ReturnStats {
 public:
  ReturnStats(std::vector<std::string> asset_names, Eigen::VectorXd mean_returns,
              Eigen::MatrixXd covariance)
      : asset_names_(std::move(asset_names)),
        mean_returns_(std::move(mean_returns)),
        covariance_(std::move(covariance)) {
    const auto n = static_cast<Eigen::Index>(asset_names_.size());
    if (n == 0) throw MalformedInputError("return stats: no assets");
    if (mean_returns_.size() != n || covariance_.rows() != n || covariance_.cols() != n)
      throw MalformedInputError("return stats: inconsistent dimensions");
    if (!mean_returns_.allFinite() || !covariance_.allFinite())
      throw MalformedInputError("return stats: non-finite entries");
    const double asymmetry = (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > 1e-12)
      throw MalformedInputError("return stats: covariance asymmetric by " +
                                std::to_string(asymmetry));
    if (covariance_.diagonal().minCoeff() < 0.0)
      throw MalformedInputError("return stats: negative variance on the diagonal");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensolver(covariance_,
                                                               Eigen::EigenvaluesOnly);
    if (eigensolver.info() != Eigen::Success || eigensolver.eigenvalues().minCoeff() < -1e-10)
      throw MalformedInputError("return stats: covariance is not positive semidefinite");
  }

  const std::vector<std::string>& asset_names() const { return asset_names_; }
  const Eigen::VectorXd& mean_returns() const { return mean_returns_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  Eigen::Index n_assets() const { return mean_returns_.size(); }

 private:
  std::vector<std::string> asset_names_;
  Eigen::VectorXd mean_returns_;
  Eigen::MatrixXd covariance_;
};

/// Per-period simple returns: prices[t+1]/prices[t] - 1.
inline std::vector<double> compute_returns(const PriceSeries& series) {
  const auto& prices = series.prices();
  std::vector<double> returns(prices.size() - 1);
  for (std::size_t t = 0; t + 1 < prices.size(); ++t)
    returns[t] = prices[t + 1] / prices[t] - 1.0;
  return returns;
}

/// Arithmetic means and sample covariance (divisor T-1) of aligned return lists.
inline ReturnStats estimate_stats(const std::vector<std::string>& asset_names,
                                  const std::vector<std::vector<double>>& aligned_returns) {
  if (asset_names.size() != aligned_returns.size())
    throw MalformedInputError("estimate_stats: asset name count does not match return lists");
  if (aligned_returns.empty()) throw MalformedInputError("estimate_stats: no assets");
  const std::size_t T = aligned_returns.front().size();
  for (const auto& r : aligned_returns)
    if (r.size() != T) throw MalformedInputError("estimate_stats: return lists differ in length");
  if (T < 2)
    throw MalformedInputError("estimate_stats: at least 2 observations required, got " +
                              std::to_string(T));

  const auto n = static_cast<Eigen::Index>(aligned_returns.size());
  Eigen::MatrixXd returns(static_cast<Eigen::Index>(T), n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (std::size_t t = 0; t < T; ++t)
      returns(static_cast<Eigen::Index>(t), j) = aligned_returns[static_cast<std::size_t>(j)][t];

  Eigen::VectorXd means = returns.colwise().mean();
  Eigen::MatrixXd centered = returns.rowwise() - means.transpose();
  Eigen::MatrixXd covariance(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double c = centered.col(i).dot(centered.col(j)) / static_cast<double>(T - 1);
      covariance(i, j) = c;
      covariance(j, i) = c;
    }
  }
  return ReturnStats(asset_names, std::move(means), std::move(covariance));
}

/// Restricts every series to the dates present in all of them, dropping the rest.
inline std::vector<PriceSeries> align_on_common_dates(const std::vector<PriceSeries>& series) {
  if (series.empty()) throw MalformedInputError("align: no price series");
  std::map<std::string, std::size_t> date_count;
  for (const auto& s : series)
    for (const auto& d : s.dates()) ++date_count[d];
  std::set<std::string> common;
  for (const auto& [date, count] : date_count)
    if (count == series.size()) common.insert(date);
  if (common.size() < 2)
    throw MalformedInputError("align: only " + std::to_string(common.size()) +
                              " dates shared by all assets, need at least 2");
  std::vector<PriceSeries> aligned;
  aligned.reserve(series.size());
  for (const auto& s : series) {
    std::vector<std::string> dates;
    std::vector<double> prices;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (common.count(s.dates()[i])) {
        dates.push_back(s.dates()[i]);
        prices.push_back(s.prices()[i]);
      }
    }
    aligned.emplace_back(s.asset_name(), std::move(dates), std::move(prices));
  }
  return aligned;
}

inline ReturnStats stats_from_price_series(const std::vector<PriceSeries>& series) {
  const std::vector<PriceSeries> aligned = align_on_common_dates(series);
  std::vector<std::string> names;
  std::vector<std::vector<double>> returns;
  names.reserve(aligned.size());
  returns.reserve(aligned.size());
  for (const auto& s : aligned) {
    names.push_back(s.asset_name());
    returns.push_back(compute_returns(s));
  }
  return estimate_stats(names, returns);
}

/// Parses a `date,asset,price` CSV into one series per asset (first-appearance order).
/// Diagnostics carry the 1-based file line number of the offending row.
inline std::vector<PriceSeries> load_price_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open price CSV '" + path + "'");

  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw MalformedInputError("price CSV '" + path + "' line " + std::to_string(line_no) + ": " +
                              what);
  };

  if (!std::getline(in, line)) fail("empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "date,asset,price") fail("expected header 'date,asset,price', got '" + line + "'");

  struct Row {
    std::string date;
    double price;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> by_asset;
  std::set<std::pair<std::string, std::string>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      fail("expected exactly 3 comma-separated fields");
    const std::string date = line.substr(0, c1);
    const std::string asset = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string price_text = line.substr(c2 + 1);

    if (!detail::is_iso_date(date)) fail("'" + date + "' is not a valid ISO-8601 date");
    if (asset.empty()) fail("empty asset name");
    char* end = nullptr;
    const double price = std::strtod(price_text.c_str(), &end);
    if (price_text.empty() || end != price_text.c_str() + price_text.size() || !std::isfinite(price))
      fail("'" + price_text + "' is not a number");
    if (price <= 0.0) fail("non-positive price " + price_text + " for asset '" + asset + "'");
    if (!seen.emplace(date, asset).second)
      fail("duplicate (date, asset) pair (" + date + ", " + asset + ")");

    if (!by_asset.count(asset)) order.push_back(asset);
    by_asset[asset].push_back({date, price});
  }
  if (by_asset.empty()) throw MalformedInputError("price CSV '" + path + "': no data rows");

  std::vector<PriceSeries> series;
  series.reserve(order.size());
  for (const auto& asset : order) {
    auto& rows = by_asset[asset];
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
    std::vector<std::string> dates;
    std::vector<double> prices;
    dates.reserve(rows.size());
    prices.reserve(rows.size());
    for (const auto& row : rows) {
      dates.push_back(row.date);
      prices.push_back(row.price);
    }
    series.emplace_back(asset, std::move(dates), std::move(prices));
  }
  return series;
}

inline ReturnStats stats_from_csv(const std::string& path) {
  return stats_from_price_series(load_price_csv(path));
}

}  // namespace esgbo
