#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opsom/archives.hpp"
#include "opsom/errors.hpp"
#include "opsom/learning.hpp"
#include "opsom/mutation.hpp"
#include "opsom/objective.hpp"
#include "opsom/ortho_init.hpp"
#include "opsom/random.hpp"
#include "opsom/swarm.hpp"

namespace opsom {

enum class Algorithm { opsom, pso };

struct Ablation {
  bool no_oa = false;
  bool no_archives = false;
  bool no_mutation = false;
  bool fixed_inertia = false;
};

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::opsom;
  std::size_t population = 40;
  std::uint64_t budget = 0;  // 0 selects 10^4 * dimension
  std::size_t oa_levels = 2;
  PsoParams pso;
  Ablation ablation;
  std::uint64_t seed = 0;
};

inline std::uint64_t resolved_budget(const OptimizerConfig& config, const ObjectiveSpec& spec) {
  return config.budget != 0 ? config.budget : 10000ULL * spec.dimension;
}

inline bool uses_oa(const OptimizerConfig& config) {
  return config.algorithm == Algorithm::opsom && !config.ablation.no_oa;
}

/// Rejects infeasible configurations before any evaluation happens.
inline void validate(const OptimizerConfig& config, const ObjectiveSpec& spec) {
  const std::size_t n = config.population;
  if (n < 6 || n % 2 != 0) {
    throw InvalidArgument("population must be even and >= 6, got " + std::to_string(n));
  }
  validate(config.pso);
  if (spec.dimension < 1) throw InvalidArgument("objective has no dimensions");
  const std::uint64_t budget = resolved_budget(config, spec);
  std::uint64_t needed = n;
  if (uses_oa(config)) {
    const auto oa = construct_oa(config.oa_levels, spec.dimension);
    needed = n + oa.rows;
  }
  if (budget < needed) {
    throw InvalidArgument("budget " + std::to_string(budget) + " cannot cover initialization (" +
                          std::to_string(needed) + " evaluations)");
  }
}

struct TraceRow {
  std::size_t iteration;
  std::uint64_t evals;
  double best_error;
  double diversity;
};

struct ArchiveRow {
  std::size_t iteration;
  std::size_t phi_size, psi_size, chi_size;
  double phi_best, psi_best, chi_best;
};

struct RunRecord {
  std::vector<TraceRow> rows;
  std::vector<ArchiveRow> archive_rows;  // OPSO-m only
  double best_fitness = 0.0;
  double best_error = 0.0;
  std::uint64_t evaluations = 0;
  std::size_t init_evaluations = 0;
  double wall_time = 0.0;  // seconds
};

/// Mean Euclidean distance of particles from the swarm centroid.
inline double diversity(const SwarmState& state) {
  const std::size_t n = state.size();
  if (n == 0) return 0.0;
  const std::size_t d = state.particles.front().position.size();
  std::vector<double> centroid(d, 0.0);
  for (const auto& p : state.particles) {
    for (std::size_t k = 0; k < d; ++k) centroid[k] += p.position[k];
  }
  for (auto& c : centroid) c /= static_cast<double>(n);
  double total = 0.0;
  for (const auto& p : state.particles) {
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double t = p.position[k] - centroid[k];
      sq += t * t;
    }
    total += std::sqrt(sq);
  }
  return total / static_cast<double>(n);
}

/// Exploration percentage per iteration: 100 * D(t) / max D. An all-zero
/// trace yields 0 everywhere. Exploitation is 100 minus this value.
inline std::vector<double> exploration_ratio(std::span<const double> diversity_trace) {
  double peak = 0.0;
  for (double d : diversity_trace) peak = std::max(peak, d);
  std::vector<double> out;
  out.reserve(diversity_trace.size());
  for (double d : diversity_trace) out.push_back(peak > 0.0 ? 100.0 * d / peak : 0.0);
  return out;
}

/// Observation points for instrumented runs.
struct OpsomHooks {
  std::function<void(const SwarmState&, const ArchiveSet&)> on_iteration;
  // (elite rank, drawn peers, elite count)
  std::function<void(std::size_t, PeerDraw, std::size_t)> on_peer_draw;
};

/// One OPSO-m iteration: split on current fitness, archive-guided regular
/// sweep, elite mutation sweep against a start-of-iteration snapshot, then
/// best and archive bookkeeping. Spends exactly n evaluations; the caller
/// must ensure they are available.
template <RandomSource R>
void opsom_iteration(SwarmState& state, ArchiveSet& archives, const OptimizerConfig& config,
                     const ObjectiveSpec& spec, EvaluationCounter& counter, R& rng,
                     const OpsomHooks* hooks = nullptr) {
  const auto& flags = config.ablation;
  const double v_max = config.pso.v_max(spec.bounds);
  const std::vector<double> gbest = state.gbest_position;
  const auto split = sort_and_split(state);
  const std::optional<double> fixed_inertia =
      flags.fixed_inertia ? std::optional<double>(config.pso.inertia) : std::nullopt;

  auto learn = [&](std::size_t i) {
    Particle& p = state.particles[i];
    std::vector<double> v;
    if (flags.no_archives) {
      v = pso_velocity(p, gbest, config.pso, v_max, rng);
    } else {
      const auto reps = sample_representatives(archives, rng);
      const auto choice = select_scheme(reps);
      v = regular_velocity_update(p, choice.guide, gbest, v_max, rng, fixed_inertia);
    }
    move_and_evaluate(p, std::move(v), spec, counter);
  };

  for (std::size_t i : split.regular) learn(i);

  if (flags.no_mutation) {
    for (std::size_t i : split.elite) learn(i);
  } else {
    const std::size_t m = split.elite.size();
    std::vector<std::vector<double>> snapshot;
    snapshot.reserve(m);
    for (std::size_t i : split.elite) snapshot.push_back(state.particles[i].position);
    for (std::size_t j = 0; j < m; ++j) {
      const auto peers = draw_peers(m, j, rng);
      if (hooks && hooks->on_peer_draw) hooks->on_peer_draw(j, peers, m);
      auto x = elite_mutate(snapshot[j], archives.phi[j].position, snapshot[peers.g],
                            snapshot[peers.h], spec.bounds, rng);
      const double f = evaluate(spec, x, counter);
      Particle& p = state.particles[split.elite[j]];
      p.position = std::move(x);
      p.fitness = f;
    }
  }

  const auto improved = update_bests(state);
  refresh_phi(archives, state);
  if (!flags.no_archives) {
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (!improved.pbest_improved[i]) continue;
      const auto& p = state.particles[i];
      push_psi(archives, {p.pbest_position, p.pbest_fitness}, rng);
    }
    if (improved.gbest_improved) push_chi(archives, {state.gbest_position, state.gbest_fitness}, rng);
  }
  ++state.iteration;
}

namespace detail {

template <RandomSource R>
std::vector<std::vector<double>> uniform_positions(std::size_t n, const ObjectiveSpec& spec, R& rng) {
  std::vector<std::vector<double>> positions(n, std::vector<double>(spec.dimension));
  for (auto& x : positions) {
    for (auto& v : x) v = spec.bounds.lower + spec.bounds.width() * rng.uniform();
  }
  return positions;
}

inline void record(RunRecord& rec, const SwarmState& state, const ObjectiveSpec& spec,
                   const EvaluationCounter& counter) {
  rec.rows.push_back({state.iteration, counter.used, error_of(spec, state.gbest_fitness), diversity(state)});
}

inline void record_archives(RunRecord& rec, const SwarmState& state, const ArchiveSet& a) {
  auto best = [](const std::vector<ArchiveEntry>& v) {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& e : v) b = std::min(b, e.fitness);
    return b;
  };
  rec.archive_rows.push_back({state.iteration, a.phi.size(), a.psi.size(), a.chi.size(),
                              best(a.phi), best(a.psi), best(a.chi)});
}

inline void finish(RunRecord& rec, const SwarmState& state, const ObjectiveSpec& spec,
                   const EvaluationCounter& counter,
                   std::chrono::steady_clock::time_point start) {
  rec.best_fitness = state.gbest_fitness;
  rec.best_error = error_of(spec, state.gbest_fitness);
  rec.evaluations = counter.used;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Full OPSO-m run. Iterations continue while a whole sweep of n evaluations
/// fits in the remaining budget, so the final count lies in (budget - n, budget].
inline RunRecord run_opsom(OptimizerConfig config, const ObjectiveSpec& spec,
                           const OpsomHooks* hooks = nullptr) {
  config.algorithm = Algorithm::opsom;
  validate(config, spec);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = config.population;
  Rng rng(config.seed);
  EvaluationCounter counter{0, resolved_budget(config, spec)};

  std::vector<std::vector<double>> positions;
  std::vector<double> fitness;
  if (config.ablation.no_oa) {
    positions = detail::uniform_positions(n, spec, rng);
    for (const auto& x : positions) fitness.push_back(evaluate(spec, x, counter));
  } else {
    auto init = build_initial_swarm(n, spec, counter, rng, config.oa_levels);
    positions = std::move(init.positions);
    fitness = std::move(init.fitness);
  }

  RunRecord rec;
  rec.init_evaluations = counter.used;
  auto state = make_swarm(std::move(positions), fitness, config.pso.v_max(spec.bounds), rng);
  auto archives = seed_archives(state);
  detail::record(rec, state, spec, counter);
  detail::record_archives(rec, state, archives);
  if (hooks && hooks->on_iteration) hooks->on_iteration(state, archives);

  while (counter.remaining() >= n) {
    opsom_iteration(state, archives, config, spec, counter, rng, hooks);
    detail::record(rec, state, spec, counter);
    detail::record_archives(rec, state, archives);
    if (hooks && hooks->on_iteration) hooks->on_iteration(state, archives);
  }
  detail::finish(rec, state, spec, counter, start);
  return rec;
}

/// Baseline PSO: uniform random start, synchronous global-best updates.
inline RunRecord run_pso(OptimizerConfig config, const ObjectiveSpec& spec) {
  config.algorithm = Algorithm::pso;
  validate(config, spec);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = config.population;
  Rng rng(config.seed);
  EvaluationCounter counter{0, resolved_budget(config, spec)};

  auto positions = detail::uniform_positions(n, spec, rng);
  std::vector<double> fitness;
  for (const auto& x : positions) fitness.push_back(evaluate(spec, x, counter));

  RunRecord rec;
  rec.init_evaluations = counter.used;
  auto state = make_swarm(std::move(positions), fitness, config.pso.v_max(spec.bounds), rng);
  detail::record(rec, state, spec, counter);
  while (counter.remaining() >= n) {
    pso_step(state, config.pso, spec, counter, rng);
    detail::record(rec, state, spec, counter);
  }
  detail::finish(rec, state, spec, counter, start);
  return rec;
}

inline RunRecord run(const OptimizerConfig& config, const ObjectiveSpec& spec) {
  return config.algorithm == Algorithm::opsom ? run_opsom(config, spec) : run_pso(config, spec);
}

}  // namespace opsom
