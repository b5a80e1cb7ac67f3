#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "opsom/optimizer.hpp"
#include "test_support.hpp"

using namespace opsom;

namespace {

const ObjectiveSpec& suite_fn(std::size_t i, std::size_t d = 10) {
  static const auto s10 = make_suite(0, 10);
  static const auto s4 = make_suite(0, 4);
  return d == 10 ? s10[i] : s4[i];
}

OptimizerConfig small(std::uint64_t budget, std::uint64_t seed = 1) {
  OptimizerConfig c;
  c.budget = budget;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Diversity, Examples) {
  SwarmState s;
  for (int i = 0; i < 3; ++i) {
    Particle p;
    p.position = {1.0, 2.0};
    s.particles.push_back(p);
  }
  EXPECT_EQ(diversity(s), 0.0);
  s.particles.resize(2);
  s.particles[0].position = {0.0, 0.0};
  s.particles[1].position = {2.0, 0.0};
  EXPECT_DOUBLE_EQ(diversity(s), 1.0);
}

TEST(Diversity, MatchesIndependentRecomputation) {
  Rng rng(17);
  SwarmState s;
  const std::size_t n = 25, d = 7;
  for (std::size_t i = 0; i < n; ++i) {
    Particle p;
    for (std::size_t k = 0; k < d; ++k) p.position.push_back(rng.uniform(-100, 100));
    s.particles.push_back(p);
  }
  // per-dimension means first, then hypot-accumulated distances
  long double total = 0;
  std::vector<long double> mean(d, 0);
  for (std::size_t k = 0; k < d; ++k) {
    for (const auto& p : s.particles) mean[k] += p.position[k];
    mean[k] /= n;
  }
  for (const auto& p : s.particles) {
    long double dist = 0;
    for (std::size_t k = 0; k < d; ++k) dist = std::hypot(dist, p.position[k] - mean[k]);
    total += dist;
  }
  EXPECT_NEAR(diversity(s), static_cast<double>(total / n), 1e-10);
}

TEST(ExplorationRatio, Examples) {
  const std::vector<double> trace{2.0, 4.0, 1.0, 0.0};
  const auto r = exploration_ratio(trace);
  EXPECT_EQ(r, (std::vector<double>{50.0, 100.0, 25.0, 0.0}));
  const std::vector<double> flat{3.0, 3.0, 3.0};
  EXPECT_EQ(exploration_ratio(flat), (std::vector<double>{100.0, 100.0, 100.0}));
  const std::vector<double> zeros{0.0, 0.0};
  EXPECT_EQ(exploration_ratio(zeros), (std::vector<double>{0.0, 0.0}));
}

TEST(Config, Validation) {
  const auto& f = suite_fn(0);
  auto c = small(0);
  EXPECT_NO_THROW(validate(c, f));
  c.population = 1;
  EXPECT_THROW(validate(c, f), InvalidArgument);
  c.population = 4;
  EXPECT_THROW(validate(c, f), InvalidArgument);
  c.population = 7;
  EXPECT_THROW(validate(c, f), InvalidArgument);
  c = small(55);
  EXPECT_THROW(validate(c, f), InvalidArgument);  // 40 + 16 needed
  c = small(56);
  EXPECT_NO_THROW(validate(c, f));
  c.oa_levels = 4;
  EXPECT_THROW(validate(c, f), InvalidArgument);
  c = small(40);
  c.algorithm = Algorithm::pso;
  EXPECT_NO_THROW(validate(c, f));
  EXPECT_THROW(run_pso(small(39), f), InvalidArgument);
  EXPECT_THROW(run_opsom(small(55), f), InvalidArgument);
}

TEST(RunOpsom, BudgetOnlyCoversInitialization) {
  const auto rec = run_opsom(small(56), suite_fn(2));
  ASSERT_EQ(rec.rows.size(), 1u);
  EXPECT_EQ(rec.rows[0].iteration, 0u);
  EXPECT_EQ(rec.evaluations, 40u);
  EXPECT_EQ(rec.init_evaluations, 40u);
}

TEST(RunOpsom, DeterministicUnderSeed) {
  const auto a = run_opsom(small(5000, 9), suite_fn(3));
  const auto b = run_opsom(small(5000, 9), suite_fn(3));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].best_error, b.rows[i].best_error);
    EXPECT_EQ(a.rows[i].diversity, b.rows[i].diversity);
  }
  const auto c = run_opsom(small(5000, 10), suite_fn(3));
  EXPECT_NE(a.rows.back().diversity, c.rows.back().diversity);
}

TEST(RunOpsom, AccountingAndMonotoneTrace) {
  for (bool no_oa : {false, true}) {
    for (std::size_t fi = 0; fi < 10; ++fi) {
      auto cfg = small(7777, fi);
      cfg.ablation.no_oa = no_oa;
      const auto rec = run_opsom(cfg, suite_fn(fi));
      const std::size_t n = cfg.population;
      EXPECT_LE(rec.evaluations, 7777u);
      EXPECT_GT(rec.evaluations + n, 7777u);
      for (std::size_t t = 0; t < rec.rows.size(); ++t) {
        EXPECT_EQ(rec.rows[t].iteration, t);
        EXPECT_EQ(rec.rows[t].evals, rec.init_evaluations + t * n);
        if (t > 0) EXPECT_LE(rec.rows[t].best_error, rec.rows[t - 1].best_error);
      }
      EXPECT_EQ(rec.best_error, error_of(suite_fn(fi), rec.best_fitness));
      EXPECT_EQ(rec.best_error, rec.rows.back().best_error);
    }
  }
}

TEST(RunOpsom, PeerDrawsAreValid) {
  std::size_t draws = 0;
  OpsomHooks hooks;
  hooks.on_peer_draw = [&](std::size_t self, PeerDraw d, std::size_t m) {
    ++draws;
    EXPECT_EQ(m, 20u);
    EXPECT_NE(d.g, d.h);
    EXPECT_NE(d.g, self);
    EXPECT_NE(d.h, self);
    EXPECT_LT(d.g, m);
    EXPECT_LT(d.h, m);
  };
  const auto rec = run_opsom(small(10000, 3), suite_fn(5), &hooks);
  EXPECT_EQ(draws, (rec.rows.size() - 1) * 20);
}

TEST(RunOpsom, ArchivesNeverEmptyAndBounded) {
  OpsomHooks hooks;
  std::size_t calls = 0;
  hooks.on_iteration = [&](const SwarmState& s, const ArchiveSet& a) {
    ++calls;
    EXPECT_EQ(a.phi.size(), s.size() / 2);
    EXPECT_FALSE(a.psi.empty());
    EXPECT_FALSE(a.chi.empty());
    EXPECT_LE(a.psi.size(), s.size());
    EXPECT_LE(a.chi.size(), s.size());
    for (const auto& p : s.particles) {
      for (double x : p.position) {
        EXPECT_GE(x, -100.0);
        EXPECT_LE(x, 100.0);
      }
    }
  };
  const auto rec = run_opsom(small(20000, 4), suite_fn(6), &hooks);
  EXPECT_EQ(calls, rec.rows.size());
}

TEST(RunOpsom, AblationFlagsChangeTrajectory) {
  const auto& f = suite_fn(2);
  const auto base = run_opsom(small(4000, 2), f);
  for (int flag = 0; flag < 4; ++flag) {
    auto cfg = small(4000, 2);
    if (flag == 0) cfg.ablation.no_oa = true;
    if (flag == 1) cfg.ablation.no_archives = true;
    if (flag == 2) cfg.ablation.no_mutation = true;
    if (flag == 3) cfg.ablation.fixed_inertia = true;
    const auto rec = run_opsom(cfg, f);
    EXPECT_NE(rec.rows.back().diversity, base.rows.back().diversity) << flag;
  }
}

TEST(RunOpsom, FullyAblatedIterationIsBaselinePso) {
  // With every flag set, one iteration must equal one PSO step under identical draws.
  const auto& spec = suite_fn(3, 4);
  Rng setup(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> pos(8, std::vector<double>(4));
    std::vector<double> fit;
    for (auto& x : pos) {
      for (auto& v : x) v = setup.uniform(-100, 100);
      EvaluationCounter probe{0, 1};
      fit.push_back(evaluate(spec, x, probe));
    }
    OptimizerConfig cfg;
    cfg.population = 8;
    cfg.ablation = {true, true, true, true};
    auto a = make_swarm(pos, fit, cfg.pso.v_max(spec.bounds), setup);
    auto b = a;
    auto archives = seed_archives(a);
    const double r = setup.uniform();
    auto src_a = constant_source(r);
    auto src_b = constant_source(r);
    EvaluationCounter ca{0, 100}, cb{0, 100};
    opsom_iteration(a, archives, cfg, spec, ca, src_a);
    pso_step(b, cfg.pso, spec, cb, src_b);
    EXPECT_EQ(ca.used, cb.used);
    EXPECT_EQ(a.gbest_fitness, b.gbest_fitness);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a.particles[i].position, b.particles[i].position);
      EXPECT_EQ(a.particles[i].velocity, b.particles[i].velocity);
      EXPECT_EQ(a.particles[i].pbest_fitness, b.particles[i].pbest_fitness);
    }
  }
}

TEST(RunPso, DeterministicMonotoneAccounted) {
  const auto& f = suite_fn(4);
  const auto a = run_pso(small(6000, 5), f);
  const auto b = run_pso(small(6000, 5), f);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  EXPECT_EQ(a.init_evaluations, 40u);
  for (std::size_t t = 0; t < a.rows.size(); ++t) {
    EXPECT_EQ(a.rows[t].best_error, b.rows[t].best_error);
    EXPECT_EQ(a.rows[t].evals, 40u + 40u * t);
    if (t > 0) EXPECT_LE(a.rows[t].best_error, a.rows[t - 1].best_error);
  }
  EXPECT_LE(a.evaluations, 6000u);
  EXPECT_GT(a.evaluations, 6000u - 40u);
}

TEST(RunOpsom, SphereConvergesAtLeastAsFarAsPso) {
  // pilot runs: both reach zero error on sphere at d=10 with 10^5 evaluations
  const auto& f = suite_fn(0);
  std::vector<double> o, p;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    o.push_back(run_opsom(small(0, seed), f).best_error);
    p.push_back(run_pso(small(0, seed), f).best_error);
  }
  std::sort(o.begin(), o.end());
  std::sort(p.begin(), p.end());
  EXPECT_LE(o[2], p[2]);
  EXPECT_LT(o[2], 1e-8);
}
