#include <gtest/gtest.h>

#include <random>

#include "hopsched/pert.hpp"

namespace hopsched {
namespace {

TEST(ExpectedTime, Examples) {
  EXPECT_EQ(expected_time({4, 6, 14}), 7.0);
  EXPECT_EQ(expected_time({2, 5, 8}), 5.0);
  for (double c : {0.0, 1.0, 3.5, 120.0}) EXPECT_DOUBLE_EQ(expected_time({c, c, c}), c);
}

TEST(ExpectedTime, RejectsBadOrdering) {
  EXPECT_THROW(expected_time({5, 4, 6}), OrderingError);
  EXPECT_THROW(expected_time({1, 4, 3}), OrderingError);
  EXPECT_THROW(expected_time({-1, 0, 1}), OrderingError);
}

TEST(ExpectedTime, BoundedAndMonotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0), step(0.0, 5.0);
  for (int trial = 0; trial < 2000; ++trial) {
    double v[3] = {u(rng), u(rng), u(rng)};
    std::sort(v, v + 3);
    ThreePointEstimate e{v[0], v[1], v[2]};
    double te = expected_time(e);
    ASSERT_GE(te, e.optimistic);
    ASSERT_LE(te, e.pessimistic);

    double d = step(rng);
    ThreePointEstimate up_p = e;
    up_p.pessimistic += d;
    EXPECT_GE(expected_time(up_p), te);
    ThreePointEstimate up_m = e;
    up_m.likely = std::min(e.likely + d, e.pessimistic);
    EXPECT_GE(expected_time(up_m), te);
    ThreePointEstimate up_o = e;
    up_o.optimistic = std::min(e.optimistic + d, e.likely);
    EXPECT_GE(expected_time(up_o), te);
  }
}

TEST(ResolveDurations, ExplicitDurationWins) {
  std::vector<TaskSpec> tasks{
      {"a", 3.0, ThreePointEstimate{1, 2, 9}, 0.0},
      {"b", std::nullopt, ThreePointEstimate{4, 6, 14}, 0.0},
  };
  EXPECT_EQ(resolve_durations(tasks), (std::vector<double>{3.0, 7.0}));
}

TEST(ResolveDurations, MissingBoth) {
  std::vector<TaskSpec> tasks{{"lonely", std::nullopt, std::nullopt, 0.0}};
  try {
    resolve_durations(tasks);
    FAIL();
  } catch (const MissingDurationError& e) {
    EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos);
  }
}

}  // namespace
}  // namespace hopsched
