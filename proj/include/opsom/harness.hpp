#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "opsom/errors.hpp"
#include "opsom/objective.hpp"
#include "opsom/optimizer.hpp"
#include "opsom/random.hpp"

namespace opsom {

struct AlgorithmVariant {
  std::string name;
  Algorithm algorithm = Algorithm::opsom;
  Ablation ablation;
};

/// Accepts "pso", "opsom" and the single-ablation names "opsom-no-oa",
/// "opsom-no-archives", "opsom-no-mutation", "opsom-fixed-inertia".
/// `extra` ablations are OR-ed into every OPSO-m variant.
inline AlgorithmVariant parse_algorithm(const std::string& name, const Ablation& extra = {}) {
  AlgorithmVariant v{name, Algorithm::opsom, extra};
  if (name == "pso") {
    v.algorithm = Algorithm::pso;
    v.ablation = {};
  } else if (name == "opsom") {
  } else if (name == "opsom-no-oa") {
    v.ablation.no_oa = true;
  } else if (name == "opsom-no-archives") {
    v.ablation.no_archives = true;
  } else if (name == "opsom-no-mutation") {
    v.ablation.no_mutation = true;
  } else if (name == "opsom-fixed-inertia") {
    v.ablation.fixed_inertia = true;
  } else {
    throw InvalidArgument("unknown algorithm '" + name + "'");
  }
  return v;
}

struct ExperimentConfig {
  std::uint64_t suite_seed = 0;
  std::vector<std::size_t> dimensions{10, 30, 50};
  std::size_t runs = 25;
  std::uint64_t base_seed = 0;
  std::vector<AlgorithmVariant> algorithms;
  std::size_t population = 40;
  std::uint64_t budget = 0;  // 0 selects 10^4 * dimension
  std::size_t oa_levels = 2;
  PsoParams pso;
  std::vector<std::string> functions;  // ids or names; empty runs the whole suite
  std::filesystem::path out_dir;       // empty skips file output
  std::size_t jobs = 1;
  bool archive_log = false;
};

struct SummaryStats {
  std::size_t count = 0;
  double best = 0.0;
  double worst = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample (n-1); 0 for a single value
};

inline SummaryStats summarize(std::span<const double> errors) {
  if (errors.empty()) throw MissingData("summarize: no run records for this cell");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.count = sorted.size();
  s.best = sorted.front();
  s.worst = sorted.back();
  const std::size_t mid = s.count / 2;
  s.median = s.count % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double e : sorted) ss += (e - s.mean) * (e - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline constexpr const char* kConvergenceHeader = "iteration,evals,best_error,diversity,exploration_pct";

inline std::string convergence_csv(const RunRecord& rec) {
  std::vector<double> div;
  div.reserve(rec.rows.size());
  for (const auto& r : rec.rows) div.push_back(r.diversity);
  const auto explore = exploration_ratio(div);
  std::string out = kConvergenceHeader;
  out += '\n';
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    const auto& r = rec.rows[i];
    out += std::to_string(r.iteration) + ',' + std::to_string(r.evals) + ',' +
           format_double(r.best_error) + ',' + format_double(r.diversity) + ',' +
           format_double(explore[i]) + '\n';
  }
  return out;
}

inline std::string archive_csv(const RunRecord& rec) {
  std::string out = "iteration,phi_size,psi_size,chi_size,phi_best,psi_best,chi_best\n";
  for (const auto& r : rec.archive_rows) {
    out += std::to_string(r.iteration) + ',' + std::to_string(r.phi_size) + ',' +
           std::to_string(r.psi_size) + ',' + std::to_string(r.chi_size) + ',' +
           format_double(r.phi_best) + ',' + format_double(r.psi_best) + ',' +
           format_double(r.chi_best) + '\n';
  }
  return out;
}

struct RunTask {
  std::size_t function;   // index into the suite for `dimension`
  std::size_t dimension;
  std::size_t algorithm;  // index into ExperimentConfig::algorithms
  std::size_t run;
};

struct CellSummary {
  std::string function_id;
  std::string function_name;
  std::string category;
  std::size_t dimension;
  std::string algorithm;
  std::uint64_t budget;
  SummaryStats stats;
};

struct ExperimentResult {
  std::vector<RunTask> tasks;
  std::vector<RunRecord> records;  // parallel to tasks
  std::vector<CellSummary> summary;
};

inline std::string run_file_stem(const std::string& function_id, std::size_t dim,
                                 const std::string& algorithm, std::size_t run) {
  std::string r = std::to_string(run);
  if (r.size() < 2) r.insert(0, 2 - r.size(), '0');
  return function_id + "_d" + std::to_string(dim) + "_" + algorithm + "_run" + r;
}

inline std::string summary_jsonl(const std::vector<CellSummary>& cells) {
  std::string out;
  for (const auto& c : cells) {
    nlohmann::ordered_json rec;
    rec["function"] = c.function_id;
    rec["name"] = c.function_name;
    rec["category"] = c.category;
    rec["dimension"] = c.dimension;
    rec["algorithm"] = c.algorithm;
    rec["runs"] = c.stats.count;
    rec["budget"] = c.budget;
    rec["best"] = c.stats.best;
    rec["worst"] = c.stats.worst;
    rec["median"] = c.stats.median;
    rec["mean"] = c.stats.mean;
    rec["std"] = c.stats.std;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

inline bool selected(const ObjectiveSpec& spec, const std::vector<std::string>& filter) {
  if (filter.empty()) return true;
  return std::find_if(filter.begin(), filter.end(), [&](const std::string& f) {
           return f == spec.id || f == spec.name;
         }) != filter.end();
}

}  // namespace detail

/// Runs every (function, dimension, algorithm, run) cell. Run r of every
/// algorithm on a given function shares the same seed and objective, so
/// comparisons are paired. Output is independent of `jobs`.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.runs < 1) throw InvalidArgument("runs must be >= 1");
  if (config.algorithms.empty()) throw InvalidArgument("no algorithms selected");
  if (config.dimensions.empty()) throw InvalidArgument("no dimensions selected");

  std::vector<std::vector<ObjectiveSpec>> suites;
  for (std::size_t d : config.dimensions) suites.push_back(make_suite(config.suite_seed, d));

  ExperimentResult result;
  for (std::size_t di = 0; di < config.dimensions.size(); ++di) {
    for (std::size_t f = 0; f < suites[di].size(); ++f) {
      if (!detail::selected(suites[di][f], config.functions)) continue;
      for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        for (std::size_t r = 0; r < config.runs; ++r) result.tasks.push_back({f, di, a, r});
      }
    }
  }
  if (result.tasks.empty()) throw InvalidArgument("function filter matched nothing");

  auto make_config = [&](const RunTask& t) {
    const auto& variant = config.algorithms[t.algorithm];
    OptimizerConfig oc;
    oc.algorithm = variant.algorithm;
    oc.ablation = variant.ablation;
    oc.population = config.population;
    oc.budget = config.budget;
    oc.oa_levels = config.oa_levels;
    oc.pso = config.pso;
    oc.seed = derive_run_seed(config.base_seed, t.run);
    return oc;
  };
  // Fail fast on infeasible settings before spending any evaluations.
  for (const auto& t : result.tasks) validate(make_config(t), suites[t.dimension][t.function]);

  if (!config.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + config.out_dir.string() + "': " + ec.message());
  }

  result.records.resize(result.tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < result.tasks.size(); i = next++) {
      try {
        const auto& t = result.tasks[i];
        const auto& spec = suites[t.dimension][t.function];
        result.records[i] = run(make_config(t), spec);
        if (!config.out_dir.empty()) {
          const auto stem = run_file_stem(spec.id, spec.dimension, config.algorithms[t.algorithm].name, t.run);
          detail::write_file(config.out_dir / (stem + ".csv"), convergence_csv(result.records[i]));
          if (config.archive_log && !result.records[i].archive_rows.empty()) {
            detail::write_file(config.out_dir / (stem + ".archives.csv"), archive_csv(result.records[i]));
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = result.tasks.size();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, result.tasks.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Tasks are ordered so each cell's runs are contiguous.
  for (std::size_t i = 0; i < result.tasks.size(); i += config.runs) {
    const auto& t = result.tasks[i];
    const auto& spec = suites[t.dimension][t.function];
    std::vector<double> errors;
    for (std::size_t r = 0; r < config.runs; ++r) errors.push_back(result.records[i + r].best_error);
    OptimizerConfig oc;
    oc.budget = config.budget;
    result.summary.push_back({spec.id, spec.name, to_string(spec.category), spec.dimension,
                              config.algorithms[t.algorithm].name, resolved_budget(oc, spec),
                              summarize(errors)});
  }
  if (!config.out_dir.empty()) {
    detail::write_file(config.out_dir / "summary.jsonl", summary_jsonl(result.summary));
    for (std::size_t di = 0; di < config.dimensions.size(); ++di) {
      detail::write_file(config.out_dir / ("suite_d" + std::to_string(config.dimensions[di]) + ".jsonl"),
                         describe_suite(suites[di]));
    }
  }
  return result;
}

}  // namespace opsom
