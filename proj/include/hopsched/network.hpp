#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hopsched/errors.hpp"

namespace hopsched {

struct Task {
  std::string id;
  double duration = 0.0;
  double demand = 0.0;
};

// Directed precedence: `to` may not start before `from` finishes.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable, validated precedence DAG. Task index i is the neuron index.
class ProjectNetwork {
 public:
  ProjectNetwork() = default;

  std::size_t size() const noexcept { return tasks_.size(); }
  bool empty() const noexcept { return tasks_.empty(); }

  const std::vector<Task>& tasks() const noexcept { return tasks_; }
  const Task& task(std::size_t i) const { return tasks_.at(i); }
  double duration(std::size_t i) const { return tasks_[i].duration; }
  double demand(std::size_t i) const { return tasks_[i].demand; }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const std::size_t> successors(std::size_t i) const { return succ_[i]; }
  std::span<const std::size_t> predecessors(std::size_t i) const { return pred_[i]; }

  /// Topological order with ties broken by ascending task index.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

  bool has_demands() const noexcept {
    return std::any_of(tasks_.begin(), tasks_.end(),
                       [](const Task& t) { return t.demand > 0.0; });
  }

  std::size_t index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownEndpointError("unknown task id '" + id + "'");
    return it->second;
  }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

 private:
  friend ProjectNetwork build_network(std::vector<Task>, std::vector<Edge>);

  std::vector<Task> tasks_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::vector<std::size_t> topo_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline std::string describe_cycle(const std::vector<Task>& tasks,
                                  const std::vector<std::size_t>& cycle) {
  std::string out;
  for (std::size_t k : cycle) out += tasks[k].id + " -> ";
  out += tasks[cycle.front()].id;
  return out;
}

// Iterative DFS; returns the node sequence of one cycle, or empty if acyclic.
inline std::vector<std::size_t> find_cycle(
    const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> colour(n, kWhite);
  std::vector<std::size_t> parent(n, n);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (colour[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    colour[root] = kGrey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < succ[v].size()) {
        std::size_t w = succ[v][next++];
        if (colour[w] == kGrey) {
          std::vector<std::size_t> cycle{v};
          for (std::size_t u = v; u != w;) {
            u = parent[u];
            cycle.push_back(u);
          }
          std::reverse(cycle.begin(), cycle.end());
          return cycle;
        }
        if (colour[w] == kWhite) {
          colour[w] = kGrey;
          parent[w] = v;
          stack.emplace_back(w, 0);
        }
      } else {
        colour[v] = kBlack;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace detail

/// Validates tasks and index edges and builds the network.
inline ProjectNetwork build_network(std::vector<Task> tasks, std::vector<Edge> edges) {
  ProjectNetwork net;
  const std::size_t n = tasks.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Task& t = tasks[i];
    if (!std::isfinite(t.duration) || !std::isfinite(t.demand))
      throw NonFiniteError("task '" + t.id + "' has a non-finite duration or demand");
    if (t.duration < 0.0)
      throw NegativeDurationError("task '" + t.id + "' has negative duration");
    if (t.demand < 0.0)
      throw NegativeDemandError("task '" + t.id + "' has negative demand");
    if (!net.index_.emplace(t.id, i).second)
      throw DuplicateIdError("duplicate task id '" + t.id + "'");
  }

  net.succ_.assign(n, {});
  net.pred_.assign(n, {});
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n)
      throw UnknownEndpointError("edge endpoint index out of range");
    if (e.from == e.to)
      throw CycleError("cycle: " + tasks[e.from].id + " -> " + tasks[e.from].id);
    net.succ_[e.from].push_back(e.to);
    net.pred_[e.to].push_back(e.from);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = net.succ_[i];
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw DuplicateEdgeError("duplicate edge from '" + tasks[i].id + "'");
    std::sort(net.pred_[i].begin(), net.pred_[i].end());
  }

  if (auto cycle = detail::find_cycle(net.succ_); !cycle.empty())
    throw CycleError("cycle: " + detail::describe_cycle(tasks, cycle));

  // Kahn's algorithm with a min-heap for the index tie-break.
  std::vector<std::size_t> indegree(n);
  for (std::size_t i = 0; i < n; ++i) indegree[i] = net.pred_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  net.topo_.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    net.topo_.push_back(v);
    for (std::size_t w : net.succ_[v])
      if (--indegree[w] == 0) ready.push(w);
  }

  net.tasks_ = std::move(tasks);
  net.edges_ = std::move(edges);
  return net;
}

/// Builds a network from edges given as (predecessor id, successor id).
inline ProjectNetwork build_network(
    std::vector<Task> tasks,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tasks.size(); ++i) index.emplace(tasks[i].id, i);
  std::vector<Edge> indexed;
  indexed.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    auto a = index.find(from);
    auto b = index.find(to);
    if (a == index.end())
      throw UnknownEndpointError("edge references unknown task '" + from + "'");
    if (b == index.end())
      throw UnknownEndpointError("edge references unknown task '" + to + "'");
    indexed.push_back({a->second, b->second});
  }
  return build_network(std::move(tasks), std::move(indexed));
}

inline std::vector<std::size_t> topological_order(const ProjectNetwork& net) {
  return net.topological_order();
}

/// Start times S_i, finite and non-negative.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<double> starts) : starts_(std::move(starts)) {
    for (std::size_t i = 0; i < starts_.size(); ++i) {
      if (!std::isfinite(starts_[i]))
        throw NonFiniteError("start time " + std::to_string(i) + " is not finite");
      if (starts_[i] < 0.0)
        throw InvalidScheduleError("start time " + std::to_string(i) + " is negative");
    }
  }
  static Schedule zeros(std::size_t n) { return Schedule(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return starts_.size(); }
  double operator[](std::size_t i) const { return starts_[i]; }
  const std::vector<double>& starts() const noexcept { return starts_; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<double> starts_;
};

inline void check_dimension(const ProjectNetwork& net, const Schedule& s) {
  if (s.size() != net.size())
    throw DimensionMismatchError("schedule has " + std::to_string(s.size()) +
                                 " start times, network has " +
                                 std::to_string(net.size()) + " tasks");
}

inline double finish(const ProjectNetwork& net, const Schedule& s, std::size_t i) {
  return s[i] + net.duration(i);
}

/// max_i (S_i + D_i); zero for an empty network.
inline double makespan(const ProjectNetwork& net, const Schedule& s) {
  check_dimension(net, s);
  double m = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) m = std::max(m, finish(net, s, i));
  return m;
}

/// Sum over edges of max(0, S_i + D_i - S_j).
inline double violation_mass(const ProjectNetwork& net, const Schedule& s) {
  check_dimension(net, s);
  double v = 0.0;
  for (const Edge& e : net.edges())
    v += std::max(0.0, finish(net, s, e.from) - s[e.to]);
  return v;
}

}  // namespace hopsched
