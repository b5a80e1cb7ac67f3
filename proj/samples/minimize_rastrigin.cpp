// Minimal library use: one OPSO-m run and one PSO run on the same problem.

#include <cstdio>

#include "opsom.hpp"

int main() {
  const auto suite = opsom::make_suite(/*suite_seed=*/0, /*dimension=*/10);
  const auto& rastrigin = suite[2];

  opsom::OptimizerConfig config;
  config.seed = 42;

  const auto a = opsom::run_opsom(config, rastrigin);
  const auto b = opsom::run_pso(config, rastrigin);
  std::printf("%s  opsom error %.6g after %llu evals\n", rastrigin.id.c_str(), a.best_error,
              static_cast<unsigned long long>(a.evaluations));
  std::printf("%s  pso   error %.6g after %llu evals\n", rastrigin.id.c_str(), b.best_error,
              static_cast<unsigned long long>(b.evaluations));
}
