// Command-line front end: optimize | compare | score | gen-data.
// Diagnostics go to stderr with exit status 2; data goes to stdout or files.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esgbo/config.hpp"
#include "esgbo/harness.hpp"
#include "esgbo/optimizer.hpp"
#include "esgbo/synthetic.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string output_path;
  std::string details_path;
  std::vector<std::string> overrides;
  std::optional<std::int64_t> seed;
};

esgbo::AppConfig load(const CliOptions& options) {
  if (options.config_path.empty()) return esgbo::AppConfig{};
  return esgbo::load_config(options.config_path, options.overrides);
}

esgbo::RunConfig run_config_for(const esgbo::AppConfig& cfg, const esgbo::Problem& problem) {
  esgbo::RunConfig run = cfg.run;
  run.n_assets = static_cast<int>(problem.stats.n_assets());
  return run;
}

int cmd_optimize(const CliOptions& options) {
  esgbo::AppConfig cfg = load(options);
  if (options.seed) cfg.run.seed = static_cast<std::uint64_t>(*options.seed);
  const esgbo::Problem problem = esgbo::resolve_problem(cfg);
  const esgbo::RunConfig run = run_config_for(cfg, problem);

  const esgbo::RunTrace trace = esgbo::bo_run(esgbo::make_fitness_objective(problem), run);
  const esgbo::PortfolioWeights weights = trace.recommendation();

  std::printf("recommended allocation (%d evaluations, seed %llu):\n", run.budget,
              static_cast<unsigned long long>(run.seed));
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    std::printf("  %-16s %5.1f%%\n", problem.stats.asset_names()[static_cast<std::size_t>(i)].c_str(),
                100.0 * weights[i]);
  std::printf("best observed fitness: %.6f (iteration %zu)\n", trace.best().fitness,
              trace.best_index + 1);

  if (!options.output_path.empty()) esgbo::emit_run_details(trace, "bo", options.output_path);
  return 0;
}

int cmd_compare(const CliOptions& options) {
  esgbo::AppConfig cfg = load(options);
  if (options.seed) cfg.base_seed = *options.seed;
  const esgbo::Problem problem = esgbo::resolve_problem(cfg);

  esgbo::ExperimentConfig experiment;
  experiment.repetitions = cfg.repetitions;
  experiment.base_seed = cfg.base_seed;
  experiment.run = run_config_for(cfg, problem);
  experiment.objective = esgbo::make_fitness_objective(problem);

  const esgbo::AggregateCurves curves = esgbo::run_experiment(experiment);
  esgbo::emit_traces(curves, options.output_path);
  if (!options.details_path.empty()) esgbo::emit_details(curves, options.details_path);

  const auto report = [&](const char* name, const esgbo::MethodCurves& method) {
    std::printf("%-8s final best %.6f +/- %.6f over %zu repetitions", name, method.final_mean(),
                method.final_std(), method.traces.size());
    if (!method.failures.empty()) std::printf(" (%zu failed)", method.failures.size());
    std::printf("\n");
  };
  report("bo", curves.bo);
  report("random", curves.random_search);
  std::printf("traces written to %s\n", options.output_path.c_str());
  return 0;
}

int cmd_score(const CliOptions& options) {
  const esgbo::AppConfig cfg = load(options);
  if (cfg.esg_assets.empty())
    throw esgbo::MalformedConfigError("score: config has no esg.assets section");

  std::vector<std::string> names;
  names.reserve(cfg.esg_assets.size());
  for (const auto& entry : cfg.esg_assets) names.push_back(entry.name);
  const std::vector<esgbo::EsgTotal> totals = esgbo::resolve_esg_totals(cfg.esg_assets, names);

  std::string report;
  char line[64];
  for (const auto& total : totals) {
    std::snprintf(line, sizeof(line), "%-16s %.2f\n", total.firm_name().c_str(), total.value());
    report += line;
  }
  if (cfg.esg_portfolio_weights) {
    const auto& w = *cfg.esg_portfolio_weights;
    const esgbo::PortfolioWeights weights(
        Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
    std::snprintf(line, sizeof(line), "portfolio ESG    %.2f\n",
                  esgbo::portfolio_esg(weights, totals));
    report += line;
  }
  std::fputs(report.c_str(), stdout);
  if (!options.output_path.empty()) {
    std::ofstream out(options.output_path, std::ios::binary);
    if (!out) throw esgbo::IoError("cannot open '" + options.output_path + "' for writing");
    out << report;
  }
  return 0;
}

int cmd_gen_data(const CliOptions& options) {
  esgbo::AppConfig cfg = load(options);
  if (options.seed) cfg.gen_data.seed = static_cast<std::uint64_t>(*options.seed);

  const esgbo::SyntheticData data = esgbo::generate_price_data(cfg.gen_data);
  esgbo::write_price_csv(data, options.output_path);

  std::printf("wrote %lld business days for %zu assets to %s\n",
              static_cast<long long>(data.prices.rows()), data.asset_names.size(),
              options.output_path.c_str());
  std::printf("realized mean returns:\n");
  for (std::size_t i = 0; i < data.asset_names.size(); ++i)
    std::printf("  %-16s % .10e\n", data.asset_names[i].c_str(),
                data.realized_mean_returns[static_cast<Eigen::Index>(i)]);
  std::printf("realized sample covariance:\n");
  for (Eigen::Index i = 0; i < data.realized_covariance.rows(); ++i) {
    std::printf(" ");
    for (Eigen::Index j = 0; j < data.realized_covariance.cols(); ++j)
      std::printf(" % .10e", data.realized_covariance(i, j));
    std::printf("\n");
  }
  return 0;
}

void add_common_options(CLI::App* sub, CliOptions& options, bool config_required,
                        bool output_required) {
  auto* config = sub->add_option("-c,--config", options.config_path, "run-config JSON file");
  if (config_required) config->required();
  auto* output = sub->add_option("-o,--output", options.output_path, "output file path");
  if (output_required) output->required();
  sub->add_option("--seed", options.seed, "override the seed relevant to this subcommand");
  sub->add_option("--override", options.overrides,
                  "config override as key.path=value, may be repeated");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization of ESG-penalized Sharpe-ratio portfolios"};
  app.require_subcommand(1);

  CliOptions options;
  int (*handler)(const CliOptions&) = nullptr;

  CLI::App* optimize =
      app.add_subcommand("optimize", "run one seeded optimization and print the allocation");
  add_common_options(optimize, options, true, false);
  optimize->callback([&] { handler = cmd_optimize; });

  CLI::App* compare = app.add_subcommand(
      "compare", "run repeated optimization vs random search and write aggregate curves");
  add_common_options(compare, options, true, true);
  compare->add_option("--details", options.details_path, "also write per-repetition detail CSV");
  compare->callback([&] { handler = cmd_compare; });

  CLI::App* score =
      app.add_subcommand("score", "print firm ESG totals and, with weights, the portfolio ESG");
  add_common_options(score, options, true, false);
  score->callback([&] { handler = cmd_score; });

  CLI::App* gen_data = app.add_subcommand(
      "gen-data", "write a synthetic price CSV with pinned sample mean returns");
  add_common_options(gen_data, options, false, true);
  gen_data->callback([&] { handler = cmd_gen_data; });

  CLI11_PARSE(app, argc, argv);

  try {
    return handler(options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
