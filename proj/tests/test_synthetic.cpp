#include "esgbo/synthetic.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

using esgbo::generate_price_data;
using esgbo::MalformedConfigError;
using esgbo::SyntheticData;
using esgbo::SyntheticDataConfig;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("esgbo_syn_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

TEST(Synthetic, DefaultConfigShape) {
  const SyntheticData data = generate_price_data(SyntheticDataConfig{});
  EXPECT_EQ(data.dates.size(), 252u);
  EXPECT_EQ(data.prices.rows(), 252);
  EXPECT_EQ(data.prices.cols(), 3);
  EXPECT_EQ(data.asset_names,
            (std::vector<std::string>{"Endesa", "Iberdrola", "Repsol"}));
  EXPECT_GT(data.prices.minCoeff(), 0.0);
  EXPECT_EQ(data.dates.front(), "2021-03-15");
  for (std::size_t i = 1; i < data.dates.size(); ++i) EXPECT_LT(data.dates[i - 1], data.dates[i]);
}

TEST(Synthetic, SkipsWeekends) {
  SyntheticDataConfig cfg;
  cfg.start_date = "2021-03-13";  // a Saturday
  cfg.days = 10;
  const SyntheticData data = generate_price_data(cfg);
  EXPECT_EQ(data.dates.front(), "2021-03-15");  // the following Monday
  // 2021-03-20/21 fall on a weekend
  for (const auto& d : data.dates) {
    EXPECT_NE(d, "2021-03-20");
    EXPECT_NE(d, "2021-03-21");
  }
}

TEST(Synthetic, SampleMeansArePinnedToTheTargets) {
  const SyntheticDataConfig cfg;
  const SyntheticData data = generate_price_data(cfg);
  for (int j = 0; j < 3; ++j)
    EXPECT_NEAR(data.realized_mean_returns[j], cfg.mean_returns[j], 1e-15);
}

TEST(Synthetic, ReingestedCsvRecoversTheMeansAndMoments) {
  TempDir dir;
  const std::string path = dir.file("prices.csv");
  const SyntheticDataConfig cfg;
  const SyntheticData data = generate_price_data(cfg);
  esgbo::write_price_csv(data, path);

  const esgbo::ReturnStats stats = esgbo::stats_from_csv(path);
  EXPECT_EQ(stats.asset_names(), cfg.asset_names);
  for (int j = 0; j < 3; ++j) {
    // prices round-trip exactly at 17 significant digits, so the re-ingested
    // moments are bit-identical to the realized ones
    EXPECT_DOUBLE_EQ(stats.mean_returns()[j], data.realized_mean_returns[j]);
    for (int k = 0; k < 3; ++k)
      EXPECT_DOUBLE_EQ(stats.covariance()(j, k), data.realized_covariance(j, k));
    EXPECT_NEAR(stats.mean_returns()[j], cfg.mean_returns[j], 1e-15);
  }
}

TEST(Synthetic, RealizedCovarianceTracksTheKnob) {
  SyntheticDataConfig cfg;
  cfg.days = 2000;  // large sample to tame estimation noise
  const SyntheticData data = generate_price_data(cfg);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(data.realized_covariance(i, j), cfg.covariance(i, j),
                  0.35 * std::sqrt(cfg.covariance(i, i) * cfg.covariance(j, j)));
}

TEST(Synthetic, DeterministicGivenTheSeed) {
  const SyntheticData a = generate_price_data(SyntheticDataConfig{});
  const SyntheticData b = generate_price_data(SyntheticDataConfig{});
  EXPECT_TRUE(a.prices == b.prices);

  SyntheticDataConfig other;
  other.seed = 99;
  EXPECT_FALSE(generate_price_data(other).prices == a.prices);
}

TEST(Synthetic, CsvIsByteStable) {
  TempDir dir;
  const std::string p1 = dir.file("a.csv");
  const std::string p2 = dir.file("b.csv");
  esgbo::write_price_csv(generate_price_data(SyntheticDataConfig{}), p1);
  esgbo::write_price_csv(generate_price_data(SyntheticDataConfig{}), p2);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  const std::string c1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string c2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  EXPECT_EQ(c1, c2);
  EXPECT_NE(c1.find("date,asset,price\n"), std::string::npos);
  EXPECT_EQ(c1.find("\r"), std::string::npos);
}

TEST(Synthetic, ValidatesConfig) {
  SyntheticDataConfig cfg;
  cfg.days = 2;
  EXPECT_THROW(generate_price_data(cfg), MalformedConfigError);

  cfg = SyntheticDataConfig{};
  cfg.mean_returns = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(generate_price_data(cfg), MalformedConfigError);

  cfg = SyntheticDataConfig{};
  cfg.start_date = "2021-13-01";
  EXPECT_THROW(generate_price_data(cfg), MalformedConfigError);

  cfg = SyntheticDataConfig{};
  cfg.covariance(0, 1) = 0.5;  // asymmetric
  EXPECT_THROW(generate_price_data(cfg), MalformedConfigError);

  cfg = SyntheticDataConfig{};
  cfg.covariance.setIdentity();
  cfg.covariance *= -1.0;
  EXPECT_THROW(generate_price_data(cfg), MalformedConfigError);

  cfg = SyntheticDataConfig{};
  cfg.initial_prices[1] = 0.0;
  EXPECT_THROW(generate_price_data(cfg), MalformedConfigError);
}

TEST(Synthetic, MinimalDayCount) {
  SyntheticDataConfig cfg;
  cfg.days = 2;  // a single return has no sample covariance
  EXPECT_THROW(generate_price_data(cfg), MalformedConfigError);

  cfg.days = 3;
  const SyntheticData data = generate_price_data(cfg);
  EXPECT_EQ(data.prices.rows(), 3);
  for (int j = 0; j < 3; ++j)
    EXPECT_NEAR(data.realized_mean_returns[j], cfg.mean_returns[j], 1e-15);
}

}  // namespace
