#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "hopsched/errors.hpp"
#include "hopsched/network.hpp"
#include "hopsched/random.hpp"

namespace hopsched {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

struct EdgeCount {
  std::uint64_t count = 0;
};
struct EdgeProbability {
  double p = 0.0;
};
using EdgeTarget = std::variant<EdgeCount, EdgeProbability>;

struct GenSpec {
  std::size_t n_tasks = 1;
  EdgeTarget edges = EdgeCount{0};
  Range duration{1.0, 10.0};
  std::optional<Range> demand;
  std::uint64_t seed = 0;
};

inline std::uint64_t max_pairs(std::size_t n) {
  return n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

inline void validate(const GenSpec& g) {
  if (g.n_tasks < 1) throw InfeasibleSpecError("n_tasks must be >= 1");
  auto check_range = [](const Range& r, const char* what) {
    if (!(std::isfinite(r.min) && std::isfinite(r.max) && r.min >= 0.0 && r.min <= r.max))
      throw InfeasibleSpecError(std::string(what) + " range must satisfy 0 <= min <= max");
  };
  check_range(g.duration, "duration");
  if (g.demand) check_range(*g.demand, "demand");
  if (const auto* c = std::get_if<EdgeCount>(&g.edges)) {
    if (c->count > max_pairs(g.n_tasks))
      throw InfeasibleSpecError("edge count " + std::to_string(c->count) + " exceeds the " +
                                std::to_string(max_pairs(g.n_tasks)) +
                                " possible pairs for " + std::to_string(g.n_tasks) + " tasks");
  } else {
    double p = std::get<EdgeProbability>(g.edges).p;
    if (!(p >= 0.0 && p <= 1.0)) throw InfeasibleSpecError("edge probability must be in [0, 1]");
  }
}

namespace detail {

// Pairs (i, j), i < j, enumerated column-major: k = j(j-1)/2 + i.
inline Edge decode_pair(std::uint64_t k) {
  auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (j * (j - 1) / 2 > k) --j;
  while ((j + 1) * j / 2 <= k) ++j;
  return {static_cast<std::size_t>(k - j * (j - 1) / 2), static_cast<std::size_t>(j)};
}

}  // namespace detail

/// Random DAG with tasks "1".."N"; edges only run from lower to higher label.
/// Draw order: durations, then demands, then edges.
inline ProjectNetwork generate(const GenSpec& g) {
  validate(g);
  Rng rng(g.seed);
  const std::size_t n = g.n_tasks;
  std::vector<Task> tasks(n);
  for (std::size_t i = 0; i < n; ++i) {
    tasks[i].id = std::to_string(i + 1);
    tasks[i].duration = uniform_real(rng, g.duration.min, g.duration.max);
  }
  if (g.demand)
    for (auto& t : tasks) t.demand = uniform_real(rng, g.demand->min, g.demand->max);

  std::vector<Edge> edges;
  if (const auto* c = std::get_if<EdgeCount>(&g.edges)) {
    // Floyd's sampling without replacement over the pair index space.
    const std::uint64_t total = max_pairs(n);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(c->count * 2);
    for (std::uint64_t j = total - c->count; j < total; ++j) {
      std::uint64_t t = uniform_index(rng, j + 1);
      chosen.insert(chosen.count(t) ? j : t);
    }
    edges.reserve(c->count);
    for (std::uint64_t k : chosen) edges.push_back(detail::decode_pair(k));
    std::sort(edges.begin(), edges.end());
  } else {
    const double p = std::get<EdgeProbability>(g.edges).p;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (uniform01(rng) < p) edges.push_back({i, j});
  }
  return build_network(std::move(tasks), std::move(edges));
}

struct SuiteInstance {
  std::size_t row = 0;
  std::uint64_t seed = 0;
  ProjectNetwork network;
};

/// Instance k of row r uses seed base_seed + r * runs_per_row + k.
inline std::uint64_t suite_seed(std::uint64_t base_seed, std::size_t row,
                                std::size_t runs_per_row, std::size_t k) {
  return base_seed + static_cast<std::uint64_t>(row) * runs_per_row + k;
}

inline std::vector<SuiteInstance> generate_suite(const std::vector<GenSpec>& rows,
                                                 std::size_t runs_per_row,
                                                 std::uint64_t base_seed) {
  std::vector<SuiteInstance> out;
  out.reserve(rows.size() * runs_per_row);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < runs_per_row; ++k) {
      GenSpec g = rows[r];
      g.seed = suite_seed(base_seed, r, runs_per_row, k);
      out.push_back({r, g.seed, generate(g)});
    }
  }
  return out;
}

}  // namespace hopsched
