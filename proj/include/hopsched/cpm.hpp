#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hopsched/errors.hpp"
#include "hopsched/network.hpp"

namespace hopsched {

struct CpmResult {
  std::vector<double> earliest_start;
  std::vector<double> latest_start;
  std::vector<double> slack;
  double t_opt = 0.0;
  std::vector<std::size_t> critical_path;
};

struct ForwardPass {
  std::vector<double> earliest_start;
  double t_opt = 0.0;
};

struct BackwardPass {
  std::vector<double> latest_start;
  std::vector<double> slack;
};

/// Earliest starts; optimal makespan when resources are unlimited.
inline ForwardPass cpm_forward(const ProjectNetwork& net) {
  ForwardPass f;
  f.earliest_start.assign(net.size(), 0.0);
  for (std::size_t j : net.topological_order()) {
    double es = 0.0;
    for (std::size_t i : net.predecessors(j))
      es = std::max(es, f.earliest_start[i] + net.duration(i));
    f.earliest_start[j] = es;
    f.t_opt = std::max(f.t_opt, es + net.duration(j));
  }
  return f;
}

// Slack below this is rounding noise from the backward subtractions.
inline double slack_epsilon(double t_opt) { return 1e-9 * std::max(1.0, t_opt); }

inline BackwardPass cpm_backward(const ProjectNetwork& net, const ForwardPass& fwd) {
  BackwardPass b;
  const std::size_t n = net.size();
  b.latest_start.assign(n, 0.0);
  b.slack.assign(n, 0.0);
  const auto& order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t i = *it;
    double latest_finish = fwd.t_opt;
    for (std::size_t j : net.successors(i))
      latest_finish = std::min(latest_finish, b.latest_start[j]);
    b.latest_start[i] = latest_finish - net.duration(i);
  }
  const double eps = slack_epsilon(fwd.t_opt);
  for (std::size_t i = 0; i < n; ++i) {
    double sl = b.latest_start[i] - fwd.earliest_start[i];
    b.slack[i] = sl <= eps ? 0.0 : sl;
  }
  return b;
}

/// Zero-slack chain from a source to a sink. Starts at the lowest-index critical
/// source and always follows the lowest-index tight critical successor.
inline std::vector<std::size_t> critical_path(const ProjectNetwork& net,
                                              const std::vector<double>& earliest_start,
                                              const std::vector<double>& slack) {
  std::vector<std::size_t> path;
  const std::size_t n = net.size();
  std::size_t cur = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (net.predecessors(i).empty() && slack[i] == 0.0) {
      cur = i;
      break;
    }
  }
  while (cur != n) {
    path.push_back(cur);
    const double ef = earliest_start[cur] + net.duration(cur);
    std::size_t next = n;
    for (std::size_t j : net.successors(cur)) {  // ascending index
      if (slack[j] == 0.0 && earliest_start[j] == ef) {
        next = j;
        break;
      }
    }
    cur = next;
  }
  return path;
}

inline CpmResult cpm(const ProjectNetwork& net) {
  ForwardPass f = cpm_forward(net);
  BackwardPass b = cpm_backward(net, f);
  CpmResult r;
  r.critical_path = critical_path(net, f.earliest_start, b.slack);
  r.earliest_start = std::move(f.earliest_start);
  r.latest_start = std::move(b.latest_start);
  r.slack = std::move(b.slack);
  r.t_opt = f.t_opt;
  return r;
}

inline std::vector<std::string> path_ids(const ProjectNetwork& net,
                                         const std::vector<std::size_t>& path) {
  std::vector<std::string> ids;
  ids.reserve(path.size());
  for (std::size_t i : path) ids.push_back(net.task(i).id);
  return ids;
}

inline constexpr std::size_t kBruteForceMaxTasks = 12;

/// Longest source-to-sink path by explicit enumeration of every path.
/// Independent of the forward pass; meant for small verification instances.
inline double brute_force_makespan(const ProjectNetwork& net) {
  if (net.size() > kBruteForceMaxTasks)
    throw TooLargeError("brute-force enumeration limited to " +
                        std::to_string(kBruteForceMaxTasks) + " tasks");
  double best = 0.0;
  // Each frame: node, running sum before the node, next successor slot.
  struct Frame {
    std::size_t node;
    double sum_before;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (std::size_t src = 0; src < net.size(); ++src) {
    if (!net.predecessors(src).empty()) continue;
    stack.push_back({src, 0.0, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto succ = net.successors(f.node);
      if (succ.empty()) {
        best = std::max(best, f.sum_before + net.duration(f.node));
        stack.pop_back();
      } else if (f.next < succ.size()) {
        std::size_t w = succ[f.next++];
        double sum = f.sum_before + net.duration(f.node);
        stack.push_back({w, sum, 0});
      } else {
        stack.pop_back();
      }
    }
  }
  return best;
}

}  // namespace hopsched
