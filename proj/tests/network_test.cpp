#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hopsched/network.hpp"
#include "test_support.hpp"

namespace hopsched {
namespace {

using testing::chain;
using testing::diamond;

TEST(BuildNetwork, MinimalChain) {
  auto net = build_network({{"A", 3, 0}, {"B", 2, 0}},
                           std::vector<std::pair<std::string, std::string>>{{"A", "B"}});
  ASSERT_EQ(net.size(), 2u);
  ASSERT_EQ(net.edges().size(), 1u);
  EXPECT_EQ(net.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(net.successors(0).size(), 1u);
  EXPECT_EQ(net.predecessors(1)[0], 0u);
}

TEST(BuildNetwork, SelfLoopIsCycle) {
  EXPECT_THROW(build_network({{"A", 1, 0}},
                             std::vector<std::pair<std::string, std::string>>{{"A", "A"}}),
               CycleError);
}

TEST(BuildNetwork, ThreeCycleNamesTheCycle) {
  try {
    build_network({{"A", 1, 0}, {"B", 1, 0}, {"C", 1, 0}},
                  std::vector<std::pair<std::string, std::string>>{
                      {"A", "B"}, {"B", "C"}, {"C", "A"}});
    FAIL() << "expected CycleError";
  } catch (const CycleError& e) {
    EXPECT_EQ(std::string(e.what()), "cycle: A -> B -> C -> A");
  }
}

TEST(BuildNetwork, RejectsBadInput) {
  using Pairs = std::vector<std::pair<std::string, std::string>>;
  EXPECT_THROW(build_network({{"A", 1, 0}, {"A", 2, 0}}, Pairs{}), DuplicateIdError);
  EXPECT_THROW(build_network({{"A", 1, 0}}, Pairs{{"A", "Z"}}), UnknownEndpointError);
  EXPECT_THROW(build_network({{"A", -1, 0}}, Pairs{}), NegativeDurationError);
  EXPECT_THROW(build_network({{"A", 1, -2}}, Pairs{}), NegativeDemandError);
  EXPECT_THROW(build_network({{"A", 1, 0}, {"B", 1, 0}}, Pairs{{"A", "B"}, {"A", "B"}}),
               DuplicateEdgeError);
  EXPECT_THROW(build_network({{"A", 1, 0}}, std::vector<Edge>{{0, 3}}), UnknownEndpointError);
}

TEST(BuildNetwork, MilestonesAllowed) {
  auto net = build_network({{"A", 0, 0}, {"B", 2, 0}}, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(net.duration(0), 0.0);
}

TEST(TopologicalOrder, Examples) {
  EXPECT_EQ(topological_order(chain({1, 1, 1})), (std::vector<std::size_t>{0, 1, 2}));
  auto edgeless = build_network({{"A", 1, 0}, {"B", 1, 0}, {"C", 1, 0}}, std::vector<Edge>{});
  EXPECT_EQ(topological_order(edgeless), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(topological_order(diamond()), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(TopologicalOrder, TieBreakPrefersLowIndexAmongReadyTasks) {
  // C -> A; B is free. Ready at start: {B, C}; B first, then C, then A.
  auto net = build_network({{"A", 1, 0}, {"B", 1, 0}, {"C", 1, 0}}, std::vector<Edge>{{2, 0}});
  EXPECT_EQ(topological_order(net), (std::vector<std::size_t>{1, 2, 0}));
}

TEST(TopologicalOrder, PermutationRespectingEveryEdge) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = testing::random_dag(rng, 1 + trial % 30, 0.2);
    auto order = topological_order(net);
    std::vector<std::size_t> pos(net.size());
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    for (const Edge& e : net.edges()) ASSERT_LT(pos[e.from], pos[e.to]);
  }
}

TEST(Makespan, Examples) {
  auto two = build_network({{"A", 2, 0}, {"B", 3, 0}}, std::vector<Edge>{});
  EXPECT_EQ(makespan(two, Schedule({0, 2})), 5.0);
  EXPECT_EQ(makespan(two, Schedule({0, 0})), 3.0);
  auto one = build_network({{"A", 7, 0}}, std::vector<Edge>{});
  EXPECT_EQ(makespan(one, Schedule({0})), 7.0);
  auto wide = build_network({{"A", 4, 0}, {"B", 9, 0}}, std::vector<Edge>{});
  EXPECT_EQ(makespan(wide, Schedule({0, 0})), 9.0);
  EXPECT_EQ(makespan(ProjectNetwork{}, Schedule{}), 0.0);
  EXPECT_THROW(makespan(wide, Schedule({0})), DimensionMismatchError);
}

TEST(Makespan, MonotoneInEachStart) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> bump(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = testing::random_dag(rng, 12, 0.3);
    auto s = testing::random_schedule(rng, net.size());
    std::size_t i = trial % net.size();
    auto starts = s.starts();
    starts[i] += bump(rng);
    EXPECT_GE(makespan(net, Schedule(starts)), makespan(net, s));
  }
}

TEST(ViolationMass, Examples) {
  auto ab = build_network({{"A", 3, 0}, {"B", 1, 0}}, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(violation_mass(ab, Schedule({0, 1})), 2.0);
  EXPECT_EQ(violation_mass(ab, Schedule({0, 3})), 0.0);
  auto fan = build_network({{"A", 2, 0}, {"B", 5, 0}, {"C", 1, 0}},
                           std::vector<Edge>{{0, 2}, {1, 2}});
  EXPECT_EQ(violation_mass(fan, Schedule({0, 0, 4})), 1.0);
  EXPECT_THROW(violation_mass(ab, Schedule({0, 0, 0})), DimensionMismatchError);
}

TEST(ViolationMass, ZeroExactlyWhenEveryEdgeHolds) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    auto net = testing::random_dag(rng, 8, 0.3);
    auto s = trial % 2 ? testing::random_schedule(rng, net.size(), 60.0)
                       : Schedule(std::vector<double>(net.size(), 0.0));
    bool every_edge_ok = true;
    for (const Edge& e : net.edges())
      every_edge_ok = every_edge_ok && s[e.to] >= s[e.from] + net.duration(e.from);
    double v = violation_mass(net, s);
    EXPECT_GE(v, 0.0);
    EXPECT_EQ(v == 0.0, every_edge_ok);
  }
}

TEST(Schedule, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(Schedule({-1.0}), InvalidScheduleError);
  EXPECT_THROW(Schedule({std::nan("")}), NonFiniteError);
}

}  // namespace
}  // namespace hopsched
