#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "opsom/errors.hpp"
#include "opsom/random.hpp"
#include "opsom/swarm.hpp"

namespace opsom {

struct ArchiveEntry {
  std::vector<double> position;
  double fitness;
};

/// The three learning archives.
///   phi: personal bests of the n/2 best particles, ascending by fitness,
///        rebuilt every iteration.
///   psi: personal bests that strictly improved, capacity n.
///   chi: global bests that strictly improved, capacity n.
/// psi and chi evict uniformly at random among all but the newest entry, so
/// the latest global best always survives in chi.
struct ArchiveSet {
  std::size_t population = 0;
  std::vector<ArchiveEntry> phi;
  std::vector<ArchiveEntry> psi;
  std::vector<ArchiveEntry> chi;

  explicit ArchiveSet(std::size_t n = 0) : population(n) {}

  std::size_t phi_capacity() const { return population / 2; }
  std::size_t psi_capacity() const { return population; }
  std::size_t chi_capacity() const { return population; }
};

inline void refresh_phi(ArchiveSet& archives, const SwarmState& state) {
  std::vector<std::size_t> order(state.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return state.particles[a].pbest_fitness < state.particles[b].pbest_fitness;
  });
  archives.phi.clear();
  const std::size_t keep = std::min(archives.phi_capacity(), order.size());
  for (std::size_t i = 0; i < keep; ++i) {
    const auto& p = state.particles[order[i]];
    archives.phi.push_back({p.pbest_position, p.pbest_fitness});
  }
}

namespace detail {

template <RandomSource R>
void push_bounded(std::vector<ArchiveEntry>& archive, ArchiveEntry entry, std::size_t capacity,
                  R& rng) {
  archive.push_back(std::move(entry));
  while (archive.size() > capacity && archive.size() > 1) {
    const std::size_t victim = rng.index(archive.size() - 1);
    archive.erase(archive.begin() + static_cast<std::ptrdiff_t>(victim));
  }
}

}  // namespace detail

template <RandomSource R>
void push_psi(ArchiveSet& archives, ArchiveEntry entry, R& rng) {
  detail::push_bounded(archives.psi, std::move(entry), archives.psi_capacity(), rng);
}

template <RandomSource R>
void push_chi(ArchiveSet& archives, ArchiveEntry entry, R& rng) {
  detail::push_bounded(archives.chi, std::move(entry), archives.chi_capacity(), rng);
}

/// Archives as they stand right after initialization: phi from the top half,
/// every initial personal best in psi, the initial global best in chi.
inline ArchiveSet seed_archives(const SwarmState& state) {
  ArchiveSet archives(state.size());
  refresh_phi(archives, state);
  for (const auto& p : state.particles) archives.psi.push_back({p.pbest_position, p.pbest_fitness});
  archives.chi.push_back({state.gbest_position, state.gbest_fitness});
  return archives;
}

struct Representatives {
  const ArchiveEntry* phi;
  const ArchiveEntry* psi;
  const ArchiveEntry* chi;
};

template <RandomSource R>
Representatives sample_representatives(const ArchiveSet& archives, R& rng) {
  if (archives.phi.empty() || archives.psi.empty() || archives.chi.empty()) {
    throw EmptyArchive("sample_representatives: an archive is empty");
  }
  const auto* p = &archives.phi[rng.index(archives.phi.size())];
  const auto* q = &archives.psi[rng.index(archives.psi.size())];
  const auto* s = &archives.chi[rng.index(archives.chi.size())];
  return {p, q, s};
}

}  // namespace opsom
