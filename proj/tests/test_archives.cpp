#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "opsom/archives.hpp"
#include "test_support.hpp"

using namespace opsom;

namespace {

SwarmState with_pbests(const std::vector<double>& pbest_fitness) {
  SwarmState s;
  for (std::size_t i = 0; i < pbest_fitness.size(); ++i) {
    Particle p;
    p.position = {static_cast<double>(i)};
    p.velocity = {0.0};
    p.pbest_position = {static_cast<double>(i)};
    p.pbest_fitness = pbest_fitness[i];
    p.fitness = pbest_fitness[i];
    s.particles.push_back(p);
  }
  const auto best = std::min_element(pbest_fitness.begin(), pbest_fitness.end()) - pbest_fitness.begin();
  s.gbest_fitness = pbest_fitness[best];
  s.gbest_position = s.particles[best].pbest_position;
  return s;
}

ArchiveEntry entry(double tag) { return {{tag}, tag}; }

}  // namespace

TEST(RefreshPhi, TopHalfByPbest) {
  ArchiveSet a(4);
  refresh_phi(a, with_pbests({3, 1, 4, 2}));
  ASSERT_EQ(a.phi.size(), 2u);
  EXPECT_EQ(a.phi[0].position, (std::vector<double>{1.0}));
  EXPECT_EQ(a.phi[1].position, (std::vector<double>{3.0}));
  EXPECT_EQ(a.phi[0].fitness, 1.0);
}

TEST(RefreshPhi, RebuildsFromScratch) {
  ArchiveSet a(4);
  auto s = with_pbests({3, 1, 4, 2});
  refresh_phi(a, s);
  for (auto& p : s.particles) p.pbest_fitness -= 10.0;
  refresh_phi(a, s);
  ASSERT_EQ(a.phi.size(), 2u);
  EXPECT_EQ(a.phi[0].fitness, -9.0);
  EXPECT_EQ(a.phi[1].fitness, -8.0);
}

TEST(RefreshPhi, PairKeepsSingleBest) {
  ArchiveSet a(2);
  refresh_phi(a, with_pbests({5, 2}));
  ASSERT_EQ(a.phi.size(), 1u);
  EXPECT_EQ(a.phi[0].fitness, 2.0);
}

TEST(RefreshPhi, MatchesBruteForceSelection) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 * (1 + rng.index(15));
    std::vector<double> f(n);
    for (auto& v : f) v = static_cast<double>(rng.index(6));
    ArchiveSet a(n);
    refresh_phi(a, with_pbests(f));
    // brute force: an index belongs iff fewer than n/2 indices precede it in (fitness, index) order
    std::vector<double> expected;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t ahead = 0;
      for (std::size_t j = 0; j < n; ++j) ahead += (f[j] < f[i] || (f[j] == f[i] && j < i));
      if (ahead < n / 2) expected.push_back(static_cast<double>(i));
    }
    std::vector<double> got;
    for (const auto& e : a.phi) got.push_back(e.position[0]);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, expected);
  }
}

TEST(PushPsi, FirstInsertAndCapacity) {
  ArchiveSet a(4);
  Rng rng(1);
  push_psi(a, entry(1), rng);
  ASSERT_EQ(a.psi.size(), 1u);
  EXPECT_EQ(a.psi[0].fitness, 1.0);
  for (int i = 2; i <= 4; ++i) push_psi(a, entry(i), rng);
  EXPECT_EQ(a.psi.size(), 4u);
  push_psi(a, entry(99), rng);
  EXPECT_EQ(a.psi.size(), 4u);
  EXPECT_EQ(a.psi.back().fitness, 99.0);
  for (int i = 0; i < 100; ++i) {
    push_psi(a, entry(100 + i), rng);
    EXPECT_LE(a.psi.size(), 4u);
    EXPECT_EQ(a.psi.back().fitness, 100.0 + i);
  }
}

TEST(PushChi, InsertionOrderAndCapacity) {
  ArchiveSet a(6);
  Rng rng(1);
  for (double f : {30.0, 20.0, 10.0}) push_chi(a, entry(f), rng);
  ASSERT_EQ(a.chi.size(), 3u);
  EXPECT_EQ(a.chi[0].fitness, 30.0);
  EXPECT_EQ(a.chi[2].fitness, 10.0);
  for (int i = 0; i < 50; ++i) push_chi(a, entry(9.0 - i), rng);
  EXPECT_EQ(a.chi.size(), 6u);
  EXPECT_EQ(a.chi.back().fitness, 9.0 - 49);
}

TEST(SeedArchives, InitialContents) {
  const auto s = with_pbests({3, 1, 4, 2, 6, 5});
  const auto a = seed_archives(s);
  EXPECT_EQ(a.phi.size(), 3u);
  EXPECT_EQ(a.psi.size(), 6u);
  ASSERT_EQ(a.chi.size(), 1u);
  EXPECT_EQ(a.chi[0].fitness, 1.0);
}

TEST(SampleRepresentatives, SingletonArchivesDeterministic) {
  ArchiveSet a(2);
  a.phi = {entry(1)};
  a.psi = {entry(2)};
  a.chi = {entry(3)};
  Rng rng(9);
  for (int i = 0; i < 5; ++i) {
    const auto r = sample_representatives(a, rng);
    EXPECT_EQ(r.phi->fitness, 1.0);
    EXPECT_EQ(r.psi->fitness, 2.0);
    EXPECT_EQ(r.chi->fitness, 3.0);
  }
}

TEST(SampleRepresentatives, ReproducibleWithSeed) {
  ArchiveSet a(10);
  for (int i = 0; i < 5; ++i) a.phi.push_back(entry(i));
  for (int i = 0; i < 10; ++i) a.psi.push_back(entry(10 + i));
  for (int i = 0; i < 10; ++i) a.chi.push_back(entry(20 + i));
  Rng r1(42), r2(42);
  for (int i = 0; i < 50; ++i) {
    const auto x = sample_representatives(a, r1);
    const auto y = sample_representatives(a, r2);
    EXPECT_EQ(x.phi, y.phi);
    EXPECT_EQ(x.psi, y.psi);
    EXPECT_EQ(x.chi, y.chi);
  }
}

TEST(SampleRepresentatives, Uniform) {
  ArchiveSet a(10);
  for (int i = 0; i < 10; ++i) {
    a.phi.push_back(entry(i));
    a.psi.push_back(entry(i));
    a.chi.push_back(entry(i));
  }
  Rng rng(123);
  std::map<double, int> phi, psi, chi;
  for (int i = 0; i < 10000; ++i) {
    const auto r = sample_representatives(a, rng);
    ++phi[r.phi->fitness];
    ++psi[r.psi->fitness];
    ++chi[r.chi->fitness];
  }
  for (const auto* counts : {&phi, &psi, &chi}) {
    ASSERT_EQ(counts->size(), 10u);
    for (const auto& [k, n] : *counts) {
      EXPECT_GE(n, 800);
      EXPECT_LE(n, 1200);
    }
  }
}

TEST(SampleRepresentatives, EmptyArchiveSignals) {
  ArchiveSet a(4);
  a.phi = {entry(1)};
  a.psi = {entry(1)};
  Rng rng(1);
  EXPECT_THROW(sample_representatives(a, rng), EmptyArchive);
}
