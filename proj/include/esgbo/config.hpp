#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "esgbo/errors.hpp"
#include "esgbo/esg.hpp"
#include "esgbo/market_data.hpp"
#include "esgbo/objective.hpp"
#include "esgbo/optimizer.hpp"
#include "esgbo/synthetic.hpp"

namespace esgbo {

struct EsgAssetEntry {
  std::string name;
  std::optional<double> total;
  std::optional<std::vector<double>> categories;
  std::optional<std::vector<double>> category_weights;
};

struct MarketConfig {
  std::optional<std::string> prices_csv;
  std::optional<ReturnStats> stats;
};

struct AppConfig {
  MarketConfig market;
  std::vector<EsgAssetEntry> esg_assets;
  std::optional<std::vector<double>> esg_portfolio_weights;
  ObjectiveConfig objective{};
  RunConfig run{};
  int repetitions = 25;
  std::int64_t base_seed = 1;
  SyntheticDataConfig gen_data{};
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void config_fail(const std::string& where, const std::string& what) {
  throw MalformedConfigError("config " + where + ": " + what);
}

inline void expect_object(const json& value, const std::string& where) {
  if (!value.is_object()) config_fail(where, "expected an object");
}

inline void expect_keys(const json& object, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : object.items()) {
    bool known = false;
    for (const char* candidate : allowed)
      if (key == candidate) known = true;
    if (!known) config_fail(where, "unknown key '" + key + "'");
  }
}

inline double as_double(const json& value, const std::string& where) {
  if (!value.is_number()) config_fail(where, "expected a number");
  return value.get<double>();
}

inline std::int64_t as_int(const json& value, const std::string& where) {
  if (!value.is_number_integer()) config_fail(where, "expected an integer");
  return value.get<std::int64_t>();
}

inline bool as_bool(const json& value, const std::string& where) {
  if (!value.is_boolean()) config_fail(where, "expected a boolean");
  return value.get<bool>();
}

inline std::string as_string(const json& value, const std::string& where) {
  if (!value.is_string()) config_fail(where, "expected a string");
  return value.get<std::string>();
}

inline std::vector<double> as_double_list(const json& value, const std::string& where) {
  if (!value.is_array()) config_fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& item : value) out.push_back(as_double(item, where));
  return out;
}

inline Eigen::VectorXd as_vector(const json& value, const std::string& where) {
  const std::vector<double> list = as_double_list(value, where);
  return Eigen::Map<const Eigen::VectorXd>(list.data(), static_cast<Eigen::Index>(list.size()));
}

inline Eigen::MatrixXd as_matrix(const json& value, const std::string& where) {
  if (!value.is_array() || value.empty()) config_fail(where, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  Eigen::MatrixXd out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::VectorXd row = as_vector(value[static_cast<std::size_t>(i)], where);
    if (i == 0) out.resize(rows, row.size());
    if (row.size() != out.cols()) config_fail(where, "rows differ in length");
    out.row(i) = row.transpose();
  }
  return out;
}

inline std::vector<std::string> as_string_list(const json& value, const std::string& where) {
  if (!value.is_array()) config_fail(where, "expected an array of strings");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) out.push_back(as_string(item, where));
  return out;
}

inline void parse_market(const json& section, MarketConfig& market) {
  expect_object(section, "market");
  expect_keys(section, "market", {"prices_csv", "stats"});
  if (section.contains("prices_csv"))
    market.prices_csv = as_string(section["prices_csv"], "market.prices_csv");
  if (section.contains("stats")) {
    const json& stats = section["stats"];
    expect_object(stats, "market.stats");
    expect_keys(stats, "market.stats", {"asset_names", "mean_returns", "covariance"});
    for (const char* key : {"asset_names", "mean_returns", "covariance"})
      if (!stats.contains(key))
        config_fail("market.stats", std::string("missing key '") + key + "'");
    try {
      market.stats = ReturnStats(as_string_list(stats["asset_names"], "market.stats.asset_names"),
                                 as_vector(stats["mean_returns"], "market.stats.mean_returns"),
                                 as_matrix(stats["covariance"], "market.stats.covariance"));
    } catch (const MalformedInputError& e) {
      config_fail("market.stats", e.what());
    }
  }
}

inline void parse_esg(const json& section, AppConfig& cfg) {
  expect_object(section, "esg");
  expect_keys(section, "esg", {"assets", "portfolio_weights"});
  if (section.contains("assets")) {
    const json& assets = section["assets"];
    if (!assets.is_array()) config_fail("esg.assets", "expected an array");
    for (const auto& item : assets) {
      expect_object(item, "esg.assets[]");
      expect_keys(item, "esg.assets[]",
                  {"name", "esg_total", "esg_categories", "esg_category_weights"});
      if (!item.contains("name")) config_fail("esg.assets[]", "missing key 'name'");
      EsgAssetEntry entry;
      entry.name = as_string(item["name"], "esg.assets[].name");
      if (item.contains("esg_total"))
        entry.total = as_double(item["esg_total"], "esg.assets[].esg_total");
      if (item.contains("esg_categories"))
        entry.categories = as_double_list(item["esg_categories"], "esg.assets[].esg_categories");
      if (item.contains("esg_category_weights"))
        entry.category_weights =
            as_double_list(item["esg_category_weights"], "esg.assets[].esg_category_weights");
      cfg.esg_assets.push_back(std::move(entry));
    }
  }
  if (section.contains("portfolio_weights"))
    cfg.esg_portfolio_weights =
        as_double_list(section["portfolio_weights"], "esg.portfolio_weights");
}

inline void parse_objective(const json& section, ObjectiveConfig& objective) {
  expect_object(section, "objective");
  expect_keys(section, "objective",
              {"risk_free", "sharpe_min", "sharpe_max", "esg_min", "esg_max",
               "esg_log_transform"});
  if (section.contains("risk_free"))
    objective.risk_free = as_double(section["risk_free"], "objective.risk_free");
  if (section.contains("sharpe_min"))
    objective.sharpe_min = as_double(section["sharpe_min"], "objective.sharpe_min");
  if (section.contains("sharpe_max"))
    objective.sharpe_max = as_double(section["sharpe_max"], "objective.sharpe_max");
  if (section.contains("esg_min"))
    objective.esg_min = as_double(section["esg_min"], "objective.esg_min");
  if (section.contains("esg_max"))
    objective.esg_max = as_double(section["esg_max"], "objective.esg_max");
  if (section.contains("esg_log_transform"))
    objective.esg_log_transform =
        as_bool(section["esg_log_transform"], "objective.esg_log_transform");
  validate(objective);
}

inline void parse_run(const json& section, RunConfig& run) {
  expect_object(section, "run");
  expect_keys(section, "run",
              {"budget", "acquisition", "ei_epsilon", "ucb_beta", "seed", "n_acq_candidates",
               "random_search_draws"});
  if (section.contains("budget"))
    run.budget = static_cast<int>(as_int(section["budget"], "run.budget"));
  if (section.contains("acquisition")) {
    const std::string kind = as_string(section["acquisition"], "run.acquisition");
    if (kind == "ei")
      run.acquisition.kind = AcquisitionKind::kExpectedImprovement;
    else if (kind == "ucb")
      run.acquisition.kind = AcquisitionKind::kUpperConfidenceBound;
    else
      config_fail("run.acquisition", "'" + kind + "' is not one of 'ei', 'ucb'");
  }
  if (section.contains("ei_epsilon"))
    run.acquisition.ei_epsilon = as_double(section["ei_epsilon"], "run.ei_epsilon");
  if (section.contains("ucb_beta"))
    run.acquisition.ucb_beta = as_double(section["ucb_beta"], "run.ucb_beta");
  if (section.contains("seed"))
    run.seed = static_cast<std::uint64_t>(as_int(section["seed"], "run.seed"));
  if (section.contains("n_acq_candidates"))
    run.n_acq_candidates =
        static_cast<int>(as_int(section["n_acq_candidates"], "run.n_acq_candidates"));
  if (section.contains("random_search_draws"))
    run.random_search_draws =
        static_cast<int>(as_int(section["random_search_draws"], "run.random_search_draws"));
}

inline void parse_experiment(const json& section, AppConfig& cfg) {
  expect_object(section, "experiment");
  expect_keys(section, "experiment", {"repetitions", "base_seed"});
  if (section.contains("repetitions"))
    cfg.repetitions = static_cast<int>(as_int(section["repetitions"], "experiment.repetitions"));
  if (section.contains("base_seed"))
    cfg.base_seed = as_int(section["base_seed"], "experiment.base_seed");
}

inline void parse_gen_data(const json& section, SyntheticDataConfig& gen) {
  expect_object(section, "gen_data");
  expect_keys(section, "gen_data",
              {"asset_names", "start_date", "days", "mean_returns", "covariance",
               "initial_prices", "seed"});
  if (section.contains("asset_names"))
    gen.asset_names = as_string_list(section["asset_names"], "gen_data.asset_names");
  if (section.contains("start_date"))
    gen.start_date = as_string(section["start_date"], "gen_data.start_date");
  if (section.contains("days"))
    gen.days = static_cast<int>(as_int(section["days"], "gen_data.days"));
  if (section.contains("mean_returns"))
    gen.mean_returns = as_vector(section["mean_returns"], "gen_data.mean_returns");
  if (section.contains("covariance"))
    gen.covariance = as_matrix(section["covariance"], "gen_data.covariance");
  if (section.contains("initial_prices"))
    gen.initial_prices = as_vector(section["initial_prices"], "gen_data.initial_prices");
  if (section.contains("seed"))
    gen.seed = static_cast<std::uint64_t>(as_int(section["seed"], "gen_data.seed"));
}

}  // namespace detail

inline AppConfig parse_config(const nlohmann::json& root) {
  detail::expect_object(root, "(top level)");
  detail::expect_keys(root, "(top level)",
                      {"market", "esg", "objective", "run", "experiment", "gen_data"});
  AppConfig cfg;
  if (root.contains("market")) detail::parse_market(root["market"], cfg.market);
  if (root.contains("esg")) detail::parse_esg(root["esg"], cfg);
  if (root.contains("objective")) detail::parse_objective(root["objective"], cfg.objective);
  if (root.contains("run")) detail::parse_run(root["run"], cfg.run);
  if (root.contains("experiment")) detail::parse_experiment(root["experiment"], cfg);
  if (root.contains("gen_data")) detail::parse_gen_data(root["gen_data"], cfg.gen_data);
  return cfg;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedConfigError("config file '" + path + "': " + e.what());
  }
}

/// Applies a dotted-path assignment such as `run.budget=1` to the raw JSON tree.
/// The value is parsed as JSON when possible and falls back to a plain string.
inline void apply_override(nlohmann::json& root, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw MalformedConfigError("override '" + assignment + "' is not of the form key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string value_text = assignment.substr(eq + 1);

  nlohmann::json value;
  try {
    value = nlohmann::json::parse(value_text);
  } catch (const nlohmann::json::parse_error&) {
    value = value_text;
  }

  nlohmann::json* node = &root;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot == std::string::npos ? dot : dot - begin);
    if (key.empty())
      throw MalformedConfigError("override '" + assignment + "' has an empty path segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key)) (*node)[key] = nlohmann::json::object();
    node = &(*node)[key];
    if (!node->is_object())
      throw MalformedConfigError("override '" + assignment + "': '" + key +
                                 "' is not a config section");
    begin = dot + 1;
  }
}

inline AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  nlohmann::json root = load_json_file(path);
  for (const auto& assignment : overrides) apply_override(root, assignment);
  return parse_config(root);
}

/// Fully assembled optimization inputs.
struct Problem {
  ReturnStats stats;
  std::vector<EsgTotal> esg_totals;
  ObjectiveConfig objective;
};

inline std::vector<EsgTotal> resolve_esg_totals(const std::vector<EsgAssetEntry>& entries,
                                                const std::vector<std::string>& asset_names) {
  std::vector<EsgTotal> totals;
  totals.reserve(asset_names.size());
  for (const auto& name : asset_names) {
    const EsgAssetEntry* entry = nullptr;
    for (const auto& candidate : entries) {
      if (candidate.name != name) continue;
      if (entry != nullptr)
        throw MalformedConfigError("esg: duplicate entry for asset '" + name + "'");
      entry = &candidate;
    }
    if (entry == nullptr)
      throw MalformedConfigError("esg: no entry for asset '" + name + "'");
    if (entry->total && entry->categories)
      throw MalformedConfigError("esg: asset '" + name +
                                 "' sets both esg_total and esg_categories");
    if (entry->total) {
      totals.emplace_back(name, *entry->total);
    } else if (entry->categories) {
      const EsgScorecard card =
          entry->category_weights
              ? EsgScorecard(name, *entry->categories, *entry->category_weights)
              : EsgScorecard::with_uniform_weights(name, *entry->categories);
      totals.push_back(scorecard_total(card));
    } else {
      throw MalformedConfigError("esg: asset '" + name +
                                 "' needs either esg_total or esg_categories");
    }
  }
  return totals;
}

inline Problem resolve_problem(const AppConfig& cfg) {
  if (cfg.market.stats && cfg.market.prices_csv)
    throw MalformedConfigError("market: provide either stats or prices_csv, not both");
  std::optional<ReturnStats> stats = cfg.market.stats;
  if (!stats) {
    if (!cfg.market.prices_csv)
      throw MalformedConfigError("market: provide either stats or prices_csv");
    stats = stats_from_csv(*cfg.market.prices_csv);
  }
  std::vector<EsgTotal> totals = resolve_esg_totals(cfg.esg_assets, stats->asset_names());
  validate(cfg.objective);
  return Problem{std::move(*stats), std::move(totals), cfg.objective};
}

/// The black-box the optimizer sees: box point -> simplex -> fitness.
inline BoxObjective make_fitness_objective(Problem problem) {
  auto shared = std::make_shared<const Problem>(std::move(problem));
  return [shared](const Eigen::VectorXd& u) {
    return fitness(box_to_simplex(u), shared->stats, shared->esg_totals, shared->objective);
  };
}

}  // namespace esgbo
