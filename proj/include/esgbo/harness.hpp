#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esgbo/errors.hpp"
#include "esgbo/format.hpp"
#include "esgbo/optimizer.hpp"

namespace esgbo {

struct ExperimentConfig {
  int repetitions = 25;
  std::int64_t base_seed = 1;
  RunConfig run{};
  BoxObjective objective;
};

struct RunFailure {
  int repetition = 0;
  std::string message;
};

struct MethodCurves {
  std::vector<double> mean_best;  // indexed by iteration
  std::vector<double> std_best;
  std::vector<RunTrace> traces;   // surviving repetitions
  std::vector<int> repetition_indices;
  std::vector<RunFailure> failures;

  double final_mean() const { return mean_best.back(); }
  double final_std() const { return std_best.back(); }
};

struct AggregateCurves {
  MethodCurves bo;
  MethodCurves random_search;
};

namespace detail {

// Per-iteration arithmetic mean and sample std (divisor n-1) of best-so-far
// curves. Order-free in the trace list.
inline void aggregate_curves(MethodCurves& method) {
  if (method.traces.empty())
    throw MalformedInputError("experiment: every repetition of a method failed");
  const std::size_t budget = method.traces.front().best_so_far.size();
  method.mean_best.assign(budget, 0.0);
  method.std_best.assign(budget, 0.0);
  const auto n = static_cast<double>(method.traces.size());
  for (std::size_t t = 0; t < budget; ++t) {
    double sum = 0.0;
    for (const auto& trace : method.traces) sum += trace.best_so_far[t];
    const double mean = sum / n;
    method.mean_best[t] = mean;
    if (method.traces.size() >= 2) {
      double ss = 0.0;
      for (const auto& trace : method.traces) {
        const double d = trace.best_so_far[t] - mean;
        ss += d * d;
      }
      method.std_best[t] = std::sqrt(ss / (n - 1.0));
    }
  }
}

}  // namespace detail

/// Runs the model-based optimizer and the random-search baseline `repetitions`
/// times with paired seeds (base_seed + r for repetition r) and aggregates the
/// per-iteration best-so-far curves. Repetitions execute concurrently; results
/// are reduced by repetition index, so concurrency never changes the output.
/// Failed repetitions are recorded and excluded from the aggregates.
inline AggregateCurves run_experiment(const ExperimentConfig& cfg) {
  if (cfg.repetitions < 1)
    throw MalformedConfigError("experiment: repetitions must be at least 1");
  if (!cfg.objective) throw MalformedConfigError("experiment: no objective configured");
  validate(cfg.run);

  struct RepetitionResult {
    std::optional<RunTrace> bo;
    std::optional<RunTrace> random_search;
    std::string bo_error;
    std::string random_error;
  };

  std::vector<std::future<RepetitionResult>> futures;
  futures.reserve(static_cast<std::size_t>(cfg.repetitions));
  for (int r = 0; r < cfg.repetitions; ++r) {
    RunConfig run = cfg.run;
    run.seed = static_cast<std::uint64_t>(cfg.base_seed + r);
    futures.push_back(std::async(std::launch::async, [run, objective = cfg.objective]() {
      RepetitionResult result;
      try {
        result.bo = bo_run(objective, run);
      } catch (const std::exception& e) {
        result.bo_error = e.what();
      }
      try {
        result.random_search = random_search_run(objective, run);
      } catch (const std::exception& e) {
        result.random_error = e.what();
      }
      return result;
    }));
  }

  AggregateCurves curves;
  for (int r = 0; r < cfg.repetitions; ++r) {
    RepetitionResult result = futures[static_cast<std::size_t>(r)].get();
    if (result.bo) {
      curves.bo.traces.push_back(std::move(*result.bo));
      curves.bo.repetition_indices.push_back(r);
    } else {
      curves.bo.failures.push_back({r, result.bo_error});
    }
    if (result.random_search) {
      curves.random_search.traces.push_back(std::move(*result.random_search));
      curves.random_search.repetition_indices.push_back(r);
    } else {
      curves.random_search.failures.push_back({r, result.random_error});
    }
  }
  detail::aggregate_curves(curves.bo);
  detail::aggregate_curves(curves.random_search);
  return curves;
}

/// `method,iteration,mean_best,std_best` rows, method in {bo, random},
/// iterations 1-based, full double precision, LF line endings.
inline void emit_traces(const AggregateCurves& curves, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "method,iteration,mean_best,std_best\n";
  const auto write_method = [&](const char* name, const MethodCurves& method) {
    for (std::size_t t = 0; t < method.mean_best.size(); ++t)
      out << name << ',' << t + 1 << ',' << detail::g17(method.mean_best[t]) << ','
          << detail::g17(method.std_best[t]) << '\n';
  };
  write_method("bo", curves.bo);
  write_method("random", curves.random_search);
  out.flush();
  if (!out) throw IoError("failed writing trace CSV '" + path + "'");
}

namespace detail {

inline void write_detail_rows(std::ofstream& out, const char* method, int repetition,
                              const RunTrace& trace) {
  for (std::size_t t = 0; t < trace.evaluations.size(); ++t) {
    const Evaluation& eval = trace.evaluations[t];
    out << method << ',' << repetition << ',' << t + 1;
    for (Eigen::Index i = 0; i < eval.weights.size(); ++i) out << ',' << g17(eval.weights[i]);
    out << ',' << g17(eval.fitness) << ',' << g17(trace.best_so_far[t]) << '\n';
  }
}

inline void write_detail_header(std::ofstream& out, Eigen::Index n_assets) {
  out << "method,repetition,iteration";
  for (Eigen::Index i = 1; i <= n_assets; ++i) out << ",w_" << i;
  out << ",fitness,best_so_far\n";
}

}  // namespace detail

/// Per-evaluation rows for every surviving repetition of both methods.
inline void emit_details(const AggregateCurves& curves, const std::string& path) {
  const MethodCurves& any =
      curves.bo.traces.empty() ? curves.random_search : curves.bo;
  if (any.traces.empty()) throw MalformedInputError("emit_details: no traces to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  detail::write_detail_header(out, any.traces.front().evaluations.front().weights.size());
  for (std::size_t i = 0; i < curves.bo.traces.size(); ++i)
    detail::write_detail_rows(out, "bo", curves.bo.repetition_indices[i], curves.bo.traces[i]);
  for (std::size_t i = 0; i < curves.random_search.traces.size(); ++i)
    detail::write_detail_rows(out, "random", curves.random_search.repetition_indices[i],
                              curves.random_search.traces[i]);
  out.flush();
  if (!out) throw IoError("failed writing detail CSV '" + path + "'");
}

/// Single-run detail trace with the same schema as emit_details.
inline void emit_run_details(const RunTrace& trace, const char* method, const std::string& path) {
  if (trace.evaluations.empty()) throw MalformedInputError("emit_run_details: empty trace");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  detail::write_detail_header(out, trace.evaluations.front().weights.size());
  detail::write_detail_rows(out, method, 0, trace);
  out.flush();
  if (!out) throw IoError("failed writing detail CSV '" + path + "'");
}

}  // namespace esgbo
