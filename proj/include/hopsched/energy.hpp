#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hopsched/errors.hpp"
#include "hopsched/network.hpp"

namespace hopsched {

struct EnergyConfig {
  double beta = 0.01;
  std::optional<double> deadline;      // T_max
  std::optional<double> resource_max;  // R_max
  double lambda_deadline = 1.0;
  double lambda_resource = 1.0;
  double grid_dt = 1.0;
};

inline void validate(const EnergyConfig& c) {
  auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
  if (!finite_nonneg(c.beta)) throw ConfigError("beta must be finite and >= 0");
  if (!finite_nonneg(c.lambda_deadline) || !finite_nonneg(c.lambda_resource))
    throw ConfigError("penalty multipliers must be finite and >= 0");
  if (!(std::isfinite(c.grid_dt) && c.grid_dt > 0.0))
    throw ConfigError("grid_dt must be finite and > 0");
  if (c.deadline && !(std::isfinite(*c.deadline) && *c.deadline > 0.0))
    throw ConfigError("deadline must be finite and > 0");
  if (c.resource_max && !(std::isfinite(*c.resource_max) && *c.resource_max > 0.0))
    throw ConfigError("resource_max must be finite and > 0");
}

/// Unweighted energy components; `total` applies beta and the lambdas.
struct EnergyBreakdown {
  double precedence = 0.0;
  double start_sum = 0.0;
  double deadline = 0.0;
  double resource = 0.0;
  double total = 0.0;
};

inline double weighted_total(const EnergyBreakdown& b, const EnergyConfig& c) {
  return b.precedence + c.beta * b.start_sum + c.lambda_deadline * b.deadline +
         c.lambda_resource * b.resource;
}

inline double precedence_energy(const ProjectNetwork& net, const Schedule& s) {
  check_dimension(net, s);
  double e = 0.0;
  for (const Edge& edge : net.edges()) {
    double v = std::max(0.0, finish(net, s, edge.from) - s[edge.to]);
    e += v * v;
  }
  return e;
}

inline double start_sum(const Schedule& s) {
  double sum = 0.0;
  for (double x : s.starts()) sum += x;
  return sum;
}

inline double deadline_energy(const ProjectNetwork& net, const Schedule& s,
                              double deadline) {
  check_dimension(net, s);
  double e = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    double v = std::max(0.0, finish(net, s, i) - deadline);
    e += v * v;
  }
  return e;
}

/// Sum of max(0, F_i - T_max), the linear deadline overshoot.
inline double deadline_overshoot(const ProjectNetwork& net, const Schedule& s,
                                 double deadline) {
  check_dimension(net, s);
  double o = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i)
    o += std::max(0.0, finish(net, s, i) - deadline);
  return o;
}

// Resource usage sampled at t_k = k * dt, k = 0..ceil(makespan / dt).
struct ResourceProfile {
  double dt = 1.0;
  std::vector<double> usage;
};

namespace detail {

// Smallest k >= 0 with k * dt >= x.
inline std::size_t first_sample_at_or_after(double x, double dt) {
  if (!(x > 0.0)) return 0;
  auto k = static_cast<std::size_t>(std::ceil(x / dt));
  while (k > 0 && static_cast<double>(k - 1) * dt >= x) --k;
  while (static_cast<double>(k) * dt < x) ++k;
  return k;
}

struct SampleRange {
  std::size_t lo = 0;
  std::size_t hi = 0;  // exclusive
  bool contains(std::size_t k) const { return lo <= k && k < hi; }
};

// Samples t with start <= t < start + duration.
inline SampleRange active_samples(double start, double duration, double dt) {
  if (!(duration > 0.0)) return {};
  return {first_sample_at_or_after(start, dt),
          first_sample_at_or_after(start + duration, dt)};
}

inline void accumulate_usage(const ProjectNetwork& net, const Schedule& s, double dt,
                             std::vector<double>& usage) {
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double d = net.demand(i);
    if (d == 0.0) continue;
    auto r = active_samples(s[i], net.duration(i), dt);
    for (std::size_t k = r.lo; k < r.hi && k < usage.size(); ++k) usage[k] += d;
  }
}

inline double overload_sq(double usage, double cap) {
  double v = std::max(0.0, usage - cap);
  return v * v;
}

}  // namespace detail

inline ResourceProfile resource_profile(const ProjectNetwork& net, const Schedule& s,
                                        double dt) {
  check_dimension(net, s);
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("grid_dt must be > 0");
  ResourceProfile p;
  p.dt = dt;
  p.usage.assign(detail::first_sample_at_or_after(makespan(net, s), dt) + 1, 0.0);
  detail::accumulate_usage(net, s, dt, p.usage);
  return p;
}

inline double resource_energy(const ResourceProfile& profile, double resource_max) {
  double e = 0.0;
  for (double r : profile.usage) e += detail::overload_sq(r, resource_max);
  return e;
}

inline EnergyBreakdown total_energy(const ProjectNetwork& net, const Schedule& s,
                                    const EnergyConfig& cfg) {
  check_dimension(net, s);
  EnergyBreakdown b;
  b.precedence = precedence_energy(net, s);
  b.start_sum = start_sum(s);
  if (cfg.deadline) b.deadline = deadline_energy(net, s, *cfg.deadline);
  if (cfg.resource_max)
    b.resource = resource_energy(resource_profile(net, s, cfg.grid_dt), *cfg.resource_max);
  b.total = weighted_total(b, cfg);
  return b;
}

namespace detail {

// Central difference of the resource energy along each coordinate with step
// h = dt. Only the samples touched by task i's shifted intervals are revisited.
inline void add_resource_gradient(const ProjectNetwork& net, const Schedule& s,
                                  const EnergyConfig& cfg, std::vector<double>& grad) {
  const double dt = cfg.grid_dt;
  const double h = dt;
  const double cap = *cfg.resource_max;
  std::vector<double> usage(first_sample_at_or_after(makespan(net, s) + h, dt) + 1, 0.0);
  accumulate_usage(net, s, dt, usage);

  for (std::size_t i = 0; i < net.size(); ++i) {
    const double d = net.demand(i);
    const double dur = net.duration(i);
    if (d == 0.0 || !(dur > 0.0)) continue;
    const SampleRange base = active_samples(s[i], dur, dt);
    const SampleRange up = active_samples(s[i] + h, dur, dt);
    const SampleRange down = active_samples(s[i] - h, dur, dt);
    const std::size_t lo = std::min({base.lo, up.lo, down.lo});
    const std::size_t hi = std::min(std::max({base.hi, up.hi, down.hi}), usage.size());
    double diff = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      const double without = base.contains(k) ? usage[k] - d : usage[k];
      const double plus = up.contains(k) ? without + d : without;
      const double minus = down.contains(k) ? without + d : without;
      diff += overload_sq(plus, cap) - overload_sq(minus, cap);
    }
    grad[i] += cfg.lambda_resource * diff / (2.0 * h);
  }
}

}  // namespace detail

/// Subgradient of the total energy. Hinges contribute zero when inactive or
/// exactly at the kink.
inline std::vector<double> energy_gradient(const ProjectNetwork& net, const Schedule& s,
                                           const EnergyConfig& cfg) {
  check_dimension(net, s);
  std::vector<double> grad(net.size(), cfg.beta);
  for (const Edge& e : net.edges()) {
    double v = finish(net, s, e.from) - s[e.to];
    if (v > 0.0) {
      grad[e.from] += 2.0 * v;
      grad[e.to] -= 2.0 * v;
    }
  }
  if (cfg.deadline && cfg.lambda_deadline > 0.0) {
    for (std::size_t i = 0; i < net.size(); ++i) {
      double v = finish(net, s, i) - *cfg.deadline;
      if (v > 0.0) grad[i] += cfg.lambda_deadline * 2.0 * v;
    }
  }
  if (cfg.resource_max && cfg.lambda_resource > 0.0)
    detail::add_resource_gradient(net, s, cfg, grad);
  return grad;
}

}  // namespace hopsched
