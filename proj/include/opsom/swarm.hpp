#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "opsom/errors.hpp"
#include "opsom/objective.hpp"
#include "opsom/random.hpp"

namespace opsom {

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  double fitness = std::numeric_limits<double>::infinity();
  std::vector<double> pbest_position;
  double pbest_fitness = std::numeric_limits<double>::infinity();
};

struct SwarmState {
  std::vector<Particle> particles;
  std::vector<double> gbest_position;
  double gbest_fitness = std::numeric_limits<double>::infinity();
  std::size_t iteration = 0;

  std::size_t size() const { return particles.size(); }
};

struct PsoParams {
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  double v_max_fraction = 0.2;

  double v_max(const SearchBounds& b) const { return v_max_fraction * b.width(); }
};

inline void validate(const PsoParams& p) {
  if (!(p.inertia >= 0.0 && p.inertia <= 1.0)) throw InvalidArgument("inertia must lie in [0,1]");
  if (!(p.cognitive >= 0.0 && p.social >= 0.0)) throw InvalidArgument("acceleration coefficients must be >= 0");
  if (!(p.v_max_fraction > 0.0 && p.v_max_fraction <= 1.0)) {
    throw InvalidArgument("v_max_fraction must lie in (0,1]");
  }
}

// Clamp each coordinate to the violated bound and zero that velocity component.
inline void handle_bounds(std::span<double> position, std::span<double> velocity,
                          const SearchBounds& bounds) {
  for (std::size_t k = 0; k < position.size(); ++k) {
    if (position[k] < bounds.lower) {
      position[k] = bounds.lower;
      velocity[k] = 0.0;
    } else if (position[k] > bounds.upper) {
      position[k] = bounds.upper;
      velocity[k] = 0.0;
    }
  }
}

inline void clamp_position(std::span<double> position, const SearchBounds& bounds) {
  for (auto& x : position) x = std::clamp(x, bounds.lower, bounds.upper);
}

inline void clamp_velocity(std::span<double> velocity, double v_max) {
  for (auto& v : velocity) v = std::clamp(v, -v_max, v_max);
}

/// Builds a swarm from initial positions; velocities are drawn uniformly in
/// [-v_max, v_max] and each particle's personal best is its starting point.
template <RandomSource R>
SwarmState make_swarm(std::vector<std::vector<double>> positions, std::span<const double> fitness,
                      double v_max, R& rng) {
  SwarmState state;
  state.particles.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Particle p;
    p.velocity.resize(positions[i].size());
    for (auto& v : p.velocity) v = -v_max + 2.0 * v_max * rng.uniform();
    p.position = std::move(positions[i]);
    p.fitness = fitness[i];
    p.pbest_position = p.position;
    p.pbest_fitness = p.fitness;
    if (p.fitness < state.gbest_fitness) {
      state.gbest_fitness = p.fitness;
      state.gbest_position = p.position;
    }
    state.particles.push_back(std::move(p));
  }
  return state;
}

struct BestUpdate {
  std::vector<bool> pbest_improved;
  bool gbest_improved = false;
};

/// Strict-improvement bookkeeping: ties keep the incumbent. When several
/// personal bests beat the global best, the fittest (lowest index on ties) wins.
inline BestUpdate update_bests(SwarmState& state) {
  BestUpdate out;
  out.pbest_improved.assign(state.size(), false);
  std::size_t best = state.size();
  double best_fitness = state.gbest_fitness;
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto& p = state.particles[i];
    if (p.fitness < p.pbest_fitness) {
      p.pbest_fitness = p.fitness;
      p.pbest_position = p.position;
      out.pbest_improved[i] = true;
    }
    if (p.pbest_fitness < best_fitness) {
      best_fitness = p.pbest_fitness;
      best = i;
    }
  }
  if (best < state.size()) {
    state.gbest_fitness = best_fitness;
    state.gbest_position = state.particles[best].pbest_position;
    out.gbest_improved = true;
  }
  return out;
}

struct Split {
  std::vector<std::size_t> elite;    // best half, ascending fitness
  std::vector<std::size_t> regular;  // worst half, ascending fitness
};

/// Ranks particles by current fitness (stable, so ties go to the lower index)
/// and splits the ranking in half.
inline Split sort_and_split(const SwarmState& state) {
  const std::size_t n = state.size();
  if (n == 0 || n % 2 != 0) throw InvalidArgument("sort_and_split: population must be even");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return state.particles[a].fitness < state.particles[b].fitness;
  });
  Split s;
  s.elite.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n / 2));
  s.regular.assign(order.begin() + static_cast<std::ptrdiff_t>(n / 2), order.end());
  return s;
}

/// v' = w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x), with r1 and r2 drawn per
/// dimension, then clamped to +-v_max.
template <RandomSource R>
std::vector<double> pso_velocity(const Particle& p, std::span<const double> gbest,
                                 const PsoParams& params, double v_max, R& rng) {
  std::vector<double> v(p.position.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    v[k] = params.inertia * p.velocity[k] +
           params.cognitive * r1 * (p.pbest_position[k] - p.position[k]) +
           params.social * r2 * (gbest[k] - p.position[k]);
  }
  clamp_velocity(v, v_max);
  return v;
}

// Moves a particle with the given velocity, applies bounds and evaluates.
// The particle is only modified once the evaluation succeeds.
inline void move_and_evaluate(Particle& p, std::vector<double> velocity, const ObjectiveSpec& spec,
                              EvaluationCounter& counter) {
  std::vector<double> x(p.position.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = p.position[k] + velocity[k];
  handle_bounds(x, velocity, spec.bounds);
  const double f = evaluate(spec, x, counter);
  p.position = std::move(x);
  p.velocity = std::move(velocity);
  p.fitness = f;
}

enum class StepStatus { completed, budget_exhausted };

/// One synchronous PSO iteration: every particle moves against the
/// start-of-iteration global best, then personal and global bests are
/// updated. If the budget runs out mid-sweep the particles evaluated so far
/// keep their moves, the rest stay put, and bests reflect all completed
/// evaluations; the iteration counter is not advanced.
template <RandomSource R>
StepStatus pso_step(SwarmState& state, const PsoParams& params, const ObjectiveSpec& spec,
                    EvaluationCounter& counter, R& rng) {
  const double v_max = params.v_max(spec.bounds);
  const std::vector<double> gbest = state.gbest_position;
  for (auto& p : state.particles) {
    auto v = pso_velocity(p, gbest, params, v_max, rng);
    try {
      move_and_evaluate(p, std::move(v), spec, counter);
    } catch (const BudgetExceeded&) {
      update_bests(state);
      return StepStatus::budget_exhausted;
    }
  }
  update_bests(state);
  ++state.iteration;
  return StepStatus::completed;
}

}  // namespace opsom
