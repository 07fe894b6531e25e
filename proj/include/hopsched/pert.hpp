#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hopsched/errors.hpp"

namespace hopsched {

struct ThreePointEstimate {
  double optimistic = 0.0;
  double likely = 0.0;
  double pessimistic = 0.0;
};

inline void validate(const ThreePointEstimate& e) {
  if (!std::isfinite(e.optimistic) || !std::isfinite(e.likely) ||
      !std::isfinite(e.pessimistic))
    throw NonFiniteError("three-point estimate has a non-finite value");
  if (!(0.0 <= e.optimistic && e.optimistic <= e.likely && e.likely <= e.pessimistic))
    throw OrderingError("three-point estimate must satisfy 0 <= optimistic <= likely <= pessimistic");
}

/// PERT expected time (O + 4M + P) / 6.
inline double expected_time(const ThreePointEstimate& e) {
  validate(e);
  return (e.optimistic + 4.0 * e.likely + e.pessimistic) / 6.0;
}

// A task as read from a project file, before its duration is settled.
struct TaskSpec {
  std::string id;
  std::optional<double> duration;
  std::optional<ThreePointEstimate> estimate;
  double demand = 0.0;
};

/// An explicit duration wins over an estimate.
inline double resolve_duration(const TaskSpec& t) {
  if (t.duration) return *t.duration;
  if (t.estimate) return expected_time(*t.estimate);
  throw MissingDurationError("task '" + t.id + "' has neither duration nor estimates");
}

inline std::vector<double> resolve_durations(const std::vector<TaskSpec>& tasks) {
  std::vector<double> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back(resolve_duration(t));
  return out;
}

}  // namespace hopsched
