#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "opsom/errors.hpp"
#include "opsom/objective.hpp"
#include "opsom/random.hpp"
#include "opsom/swarm.hpp"

namespace opsom {

struct PeerDraw {
  std::size_t g;
  std::size_t h;
};

/// Two distinct elite ranks, both different from `self`. Needs at least three elites.
template <RandomSource R>
PeerDraw draw_peers(std::size_t elite_count, std::size_t self, R& rng) {
  if (elite_count < 3) throw InvalidArgument("elite mutation needs at least three elites");
  std::size_t g = rng.index(elite_count - 1);
  if (g >= self) ++g;
  const std::size_t lo = std::min(self, g);
  const std::size_t hi = std::max(self, g);
  std::size_t h = rng.index(elite_count - 2);
  if (h >= lo) ++h;
  if (h >= hi) ++h;
  return {g, h};
}

/// Best-rand-to-current move:
///   x'_k = x_k + d1_k * (guide_k - x_k) + d2_k * (xg_k - xh_k)
/// with d1, d2 uniform in [0,1] per dimension, clamped to the box. Velocity is
/// not touched.
template <RandomSource R>
std::vector<double> elite_mutate(std::span<const double> position, std::span<const double> guide,
                                 std::span<const double> peer_g, std::span<const double> peer_h,
                                 const SearchBounds& bounds, R& rng) {
  std::vector<double> x(position.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d1 = rng.uniform();
    const double d2 = rng.uniform();
    x[k] = position[k] + d1 * (guide[k] - position[k]) + d2 * (peer_g[k] - peer_h[k]);
  }
  clamp_position(x, bounds);
  return x;
}

}  // namespace opsom
