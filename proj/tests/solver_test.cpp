#include <gtest/gtest.h>

#include <random>

#include "hopsched/cpm.hpp"
#include "hopsched/solver.hpp"
#include "test_support.hpp"

namespace hopsched {
namespace {

using testing::chain;
using testing::diamond;

TEST(SolveStep, ClampsAfterUpdate) {
  auto net = build_network({{"A", 3, 0}, {"B", 1, 0}}, std::vector<Edge>{{0, 1}});
  EnergyConfig cfg;
  cfg.beta = 0.0;
  // grad (4, -4) -> raw (-0.4, 1.4) -> clamped (0, 1.4)
  auto next = solve_step(net, Schedule({0, 1}), cfg, 0.1);
  EXPECT_EQ(next[0], 0.0);
  EXPECT_DOUBLE_EQ(next[1], 1.4);
}

TEST(SolveStep, FixedPointWhenGradientVanishes) {
  auto net = chain({2, 3});
  EnergyConfig cfg;
  cfg.beta = 0.0;
  Schedule s({1.0, 5.0});
  EXPECT_EQ(solve_step(net, s, cfg, 0.01), s);
}

TEST(SolveStep, RejectsBadStepAndDivergence) {
  auto net = chain({2, 3});
  EXPECT_THROW(solve_step(net, Schedule({0, 0}), EnergyConfig{}, 0.0), ConfigError);
  EnergyConfig cfg;
  cfg.beta = 1e308;
  EXPECT_THROW(solve_step(net, Schedule({1e308, 1e308}), cfg, 1e10), NonFiniteError);
}

TEST(SolveStep, NeverProducesNegativeStarts) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = testing::random_dag(rng, 15, 0.3);
    auto s = testing::random_schedule(rng, net.size(), 5.0);
    EnergyConfig cfg;
    cfg.beta = 0.5;
    cfg.deadline = 4.0;
    for (int k = 0; k < 20; ++k) {
      s = solve_step(net, s, cfg, 0.05);
      for (double x : s.starts()) ASSERT_GE(x, 0.0);
    }
  }
}

TEST(RepairSchedule, Examples) {
  auto ab = build_network({{"A", 3, 0}, {"B", 1, 0}}, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(repair_schedule(ab, Schedule({0, 1})), Schedule({0, 3}));
  Schedule feasible({0, 4});
  EXPECT_EQ(repair_schedule(ab, feasible), feasible);
  auto d = diamond();
  auto fixed = repair_schedule(d, Schedule({0, 0, 0, 0}));
  EXPECT_EQ(fixed, Schedule({0, 2, 2, 6}));
}

TEST(RepairSchedule, FeasibleIdempotentAndMonotone) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    auto net = testing::random_dag(rng, 20, 0.2);
    auto s = testing::random_schedule(rng, net.size());
    auto r = repair_schedule(net, s);
    EXPECT_EQ(violation_mass(net, r), 0.0);
    EXPECT_EQ(repair_schedule(net, r), r);
    for (std::size_t i = 0; i < net.size(); ++i) EXPECT_GE(r[i], s[i]);
  }
}

TEST(Solve, EdgelessConvergesImmediately) {
  auto net = build_network({{"A", 1, 0}, {"B", 2, 0}, {"C", 3, 0}}, std::vector<Edge>{});
  EnergyConfig cfg;
  cfg.beta = 0.0;
  SolverConfig sc;
  auto r = solve(net, cfg, sc);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, sc.tol_window);
  EXPECT_EQ(r.schedule, Schedule::zeros(3));
}

// Minimiser of max(0, 3 - x)^2 + beta * x over a fine grid.
double scan_minimiser(double beta) {
  double best_x = 0.0, best_e = INFINITY;
  for (int k = 0; k <= 600000; ++k) {
    double x = k * 1e-5;
    double h = std::max(0.0, 3.0 - x);
    double e = h * h + beta * x;
    if (e < best_e) {
      best_e = e;
      best_x = x;
    }
  }
  return best_x;
}

TEST(Solve, TwoTaskChainSettlesAtEnergyMinimum) {
  auto net = build_network({{"A", 3, 0}, {"B", 1, 0}}, std::vector<Edge>{{0, 1}});
  EnergyConfig cfg;
  cfg.beta = 0.01;
  SolverConfig sc;
  sc.repair = false;
  auto r = solve(net, cfg, sc);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.schedule[0], 0.0);
  const double target = scan_minimiser(cfg.beta);
  EXPECT_NEAR(target, 2.995, 1e-5);
  EXPECT_NEAR(r.schedule[1], target, 0.01);
}

TEST(Solve, ThreeChainRepairedMatchesCpm) {
  auto net = chain({2, 3, 4});
  EnergyConfig cfg;
  cfg.beta = 0.01;
  auto r = solve(net, cfg, SolverConfig{});
  EXPECT_TRUE(r.repaired);
  EXPECT_DOUBLE_EQ(r.makespan, 9.0);
  EXPECT_EQ(r.makespan, cpm_forward(net).t_opt);
  EXPECT_EQ(r.violation, 0.0);
  EXPECT_GE(r.raw_violation, 0.0);
}

TEST(Solve, StoredMetricsMatchSchedule) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = testing::random_dag(rng, 25, 0.15);
    SolverConfig sc;
    sc.max_iters = 300;
    sc.repair = trial % 2 == 0;
    auto r = solve(net, EnergyConfig{}, sc);
    EXPECT_EQ(r.violation, violation_mass(net, r.schedule));
    EXPECT_EQ(r.makespan, makespan(net, r.schedule));
    EXPECT_EQ(r.raw_violation, violation_mass(net, r.raw_schedule));
    if (sc.repair) {
      EXPECT_GE(r.makespan, cpm_forward(net).t_opt);
    }
  }
}

TEST(Solve, EnergyDoesNotRiseOverHundredSteps) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    auto net = testing::random_dag(rng, 30, 0.1, 1.0, 10.0);
    EnergyConfig cfg;
    cfg.beta = 0.0;
    Schedule start = trial % 2 ? testing::random_schedule(rng, net.size())
                               : Schedule::zeros(net.size());
    Schedule s = start;
    for (int k = 0; k < 100; ++k) s = solve_step(net, s, cfg, 0.01);
    EXPECT_LE(total_energy(net, s, cfg).total, total_energy(net, start, cfg).total)
        << "trial " << trial;
  }
}

TEST(Solve, DeterministicAndTraceable) {
  std::mt19937_64 rng(47);
  auto net = testing::random_dag(rng, 40, 0.1, 1.0, 10.0, true);
  EnergyConfig cfg;
  cfg.resource_max = 6.0;
  cfg.deadline = 30.0;
  SolverConfig sc;
  sc.max_iters = 500;
  sc.record_trace = true;
  auto a = solve(net, cfg, sc);
  auto b = solve(net, cfg, sc);
  EXPECT_EQ(a.schedule, b.schedule);
  EXPECT_EQ(a.raw_schedule, b.raw_schedule);
  EXPECT_EQ(a.iterations, b.iterations);
  ASSERT_EQ(a.energy_trace.size(), static_cast<std::size_t>(a.iterations));
  for (std::size_t k = 0; k < a.energy_trace.size(); ++k)
    EXPECT_EQ(a.energy_trace[k].total, b.energy_trace[k].total);
}

TEST(Solve, UsesInitialScheduleAndValidatesConfig) {
  auto net = chain({2, 3});
  EnergyConfig cfg;
  cfg.beta = 0.0;
  SolverConfig sc;
  auto r = solve(net, cfg, sc, Schedule({0, 2}));
  EXPECT_EQ(r.raw_schedule, Schedule({0, 2}));
  EXPECT_TRUE(r.converged);
  sc.alpha = -1.0;
  EXPECT_THROW(solve(net, cfg, sc), ConfigError);
  EXPECT_THROW(solve(net, cfg, SolverConfig{}, Schedule({0})), DimensionMismatchError);
}

}  // namespace
}  // namespace hopsched
