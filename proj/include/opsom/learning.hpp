#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "opsom/archives.hpp"
#include "opsom/random.hpp"
#include "opsom/swarm.hpp"

namespace opsom {

enum class Scheme { phi = 1, psi = 2, chi = 3 };

struct SchemeChoice {
  Scheme which;
  std::span<const double> guide;
};

/// Picks the archive whose representative is fittest. Ties go to phi, then psi.
inline Scheme select_scheme(double phi_fitness, double psi_fitness, double chi_fitness) {
  if (phi_fitness <= psi_fitness && phi_fitness <= chi_fitness) return Scheme::phi;
  if (psi_fitness <= chi_fitness) return Scheme::psi;
  return Scheme::chi;
}

inline SchemeChoice select_scheme(const Representatives& reps) {
  switch (select_scheme(reps.phi->fitness, reps.psi->fitness, reps.chi->fitness)) {
    case Scheme::phi: return {Scheme::phi, reps.phi->position};
    case Scheme::psi: return {Scheme::psi, reps.psi->position};
    case Scheme::chi: return {Scheme::chi, reps.chi->position};
  }
  return {Scheme::phi, reps.phi->position};
}

/// Archive-guided velocity for a regular particle:
///   v'_k = r1_k * v_k + r2_k * (guide_k - x_k) + r3_k * (gbest_k - x_k)
/// clamped to +-v_max. When `fixed_inertia` is set, r1_k is replaced by that
/// constant.
template <RandomSource R>
std::vector<double> regular_velocity_update(const Particle& p, std::span<const double> guide,
                                            std::span<const double> gbest, double v_max, R& rng,
                                            std::optional<double> fixed_inertia = std::nullopt) {
  std::vector<double> v(p.position.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double r1 = fixed_inertia ? *fixed_inertia : rng.uniform();
    const double r2 = rng.uniform();
    const double r3 = rng.uniform();
    v[k] = r1 * p.velocity[k] + r2 * (guide[k] - p.position[k]) + r3 * (gbest[k] - p.position[k]);
  }
  clamp_velocity(v, v_max);
  return v;
}

}  // namespace opsom
