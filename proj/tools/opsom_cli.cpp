// Command-line front-end: run / compare experiments, print orthogonal arrays,
// export suite descriptions.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opsom.hpp"

namespace {

struct RunOptions {
  std::vector<std::string> algos{"opsom"};
  std::vector<std::size_t> dims{10, 30, 50};
  std::size_t pop = 40;
  std::uint64_t budget = 0;
  std::size_t runs = 25;
  std::uint64_t seed = 0;
  std::uint64_t suite_seed = 0;
  std::size_t levels = 2;
  std::string out = "results";
  std::vector<std::string> functions;
  std::size_t jobs = 1;
  bool archive_log = false;
  opsom::Ablation ablation;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--algo", o.algos, "Algorithms: pso, opsom, opsom-no-oa, opsom-no-archives, "
                                     "opsom-no-mutation, opsom-fixed-inertia")
      ->delimiter(',');
  cmd->add_option("--dim", o.dims, "Dimensions (comma separated)")->delimiter(',')->check(CLI::Range(2, 1000));
  cmd->add_option("--pop", o.pop, "Population size (even, >= 6)");
  cmd->add_option("--budget", o.budget, "Evaluations per run (default 10000 * dim)");
  cmd->add_option("--runs", o.runs, "Independent runs per problem")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Base seed for run seeds");
  cmd->add_option("--suite-seed", o.suite_seed, "Seed for shifts and rotations");
  cmd->add_option("--levels", o.levels, "Orthogonal array level count (prime)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--functions", o.functions, "Restrict to function ids or names")->delimiter(',');
  cmd->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber);
  cmd->add_flag("--archive-log", o.archive_log, "Also write per-iteration archive statistics");
  cmd->add_flag("--no-oa", o.ablation.no_oa, "OPSO-m: uniform random initialization");
  cmd->add_flag("--no-archives", o.ablation.no_archives, "OPSO-m: baseline velocity for regular particles");
  cmd->add_flag("--no-mutation", o.ablation.no_mutation, "OPSO-m: elites follow the regular update");
  cmd->add_flag("--fixed-inertia", o.ablation.fixed_inertia, "OPSO-m: inertia weight instead of r1");
}

int execute(const RunOptions& o) {
  opsom::ExperimentConfig cfg;
  for (const auto& a : o.algos) cfg.algorithms.push_back(opsom::parse_algorithm(a, o.ablation));
  cfg.dimensions = o.dims;
  cfg.population = o.pop;
  cfg.budget = o.budget;
  cfg.runs = o.runs;
  cfg.base_seed = o.seed;
  cfg.suite_seed = o.suite_seed;
  cfg.oa_levels = o.levels;
  cfg.out_dir = o.out;
  cfg.functions = o.functions;
  cfg.jobs = o.jobs;
  cfg.archive_log = o.archive_log;

  const auto result = opsom::run_experiment(cfg);
  std::printf("%-5s %-40s %4s %-20s %14s %14s %14s\n", "id", "function", "dim", "algorithm", "best",
              "median", "mean");
  for (const auto& c : result.summary) {
    std::printf("%-5s %-40s %4zu %-20s %14.6e %14.6e %14.6e\n", c.function_id.c_str(),
                c.function_name.c_str(), c.dimension, c.algorithm.c_str(), c.stats.best,
                c.stats.median, c.stats.mean);
  }
  std::printf("wrote %zu convergence files and summary.jsonl to %s\n", result.records.size(),
              o.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OPSO-m and baseline PSO experiment harness"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment protocol");
  add_run_options(run_cmd, run_opts);

  RunOptions cmp_opts;
  cmp_opts.algos = {"opsom", "pso"};
  auto* cmp_cmd = app.add_subcommand("compare", "Run with two or more algorithms on paired seeds");
  add_run_options(cmp_cmd, cmp_opts);

  std::size_t oa_levels = 2;
  std::size_t oa_factors = 1;
  auto* oa_cmd = app.add_subcommand("oa", "Print an orthogonal array, one row per line");
  oa_cmd->add_option("--levels", oa_levels, "Level count (prime)");
  oa_cmd->add_option("--factors", oa_factors, "Minimum number of columns")->check(CLI::PositiveNumber);

  std::uint64_t suite_seed = 0;
  std::size_t suite_dim = 10;
  auto* suite_cmd = app.add_subcommand("suite", "Describe the benchmark suite as JSON lines");
  suite_cmd->add_option("--suite-seed", suite_seed, "Seed for shifts and rotations");
  suite_cmd->add_option("--dim", suite_dim, "Dimension");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return execute(run_opts);
    if (*cmp_cmd) {
      if (cmp_opts.algos.size() < 2) {
        std::cerr << "compare needs at least two algorithms\n";
        return 2;
      }
      return execute(cmp_opts);
    }
    if (*oa_cmd) {
      const auto oa = opsom::construct_oa(oa_levels, oa_factors);
      std::ostringstream os;
      for (std::size_t r = 0; r < oa.rows; ++r) {
        for (std::size_t c = 0; c < oa.cols; ++c) os << (c ? " " : "") << oa.at(r, c);
        os << '\n';
      }
      std::cout << os.str();
      return 0;
    }
    if (*suite_cmd) {
      std::cout << opsom::describe_suite(opsom::make_suite(suite_seed, suite_dim));
      return 0;
    }
  } catch (const opsom::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
