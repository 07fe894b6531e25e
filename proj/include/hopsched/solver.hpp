#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hopsched/energy.hpp"
#include "hopsched/errors.hpp"
#include "hopsched/network.hpp"

namespace hopsched {

struct SolverConfig {
  double alpha = 0.01;
  int max_iters = 5000;
  double tol = 1e-4;
  int tol_window = 10;
  bool repair = true;
  bool record_trace = false;
  std::optional<std::uint64_t> seed;  // reserved; the dynamics are deterministic
};

inline void validate(const SolverConfig& c) {
  if (!(std::isfinite(c.alpha) && c.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(std::isfinite(c.tol) && c.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (c.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (c.tol_window < 1) throw ConfigError("tol_window must be >= 1");
}

struct SolveResult {
  Schedule schedule;            // returned schedule (repaired if repair ran)
  Schedule raw_schedule;        // state of the dynamics when iteration stopped
  int iterations = 0;
  bool converged = false;
  bool repaired = false;
  std::vector<EnergyBreakdown> energy_trace;
  EnergyBreakdown final_energy;  // of `schedule`
  double violation = 0.0;        // violation_mass(schedule)
  double makespan = 0.0;         // T_H of `schedule`
  double raw_violation = 0.0;    // violation_mass(raw_schedule)
  double raw_makespan = 0.0;
};

/// One synchronous update S <- max(0, S - alpha * grad E(S)).
inline Schedule solve_step(const ProjectNetwork& net, const Schedule& s,
                           const EnergyConfig& cfg, double alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw ConfigError("alpha must be > 0");
  std::vector<double> grad = energy_gradient(net, s, cfg);
  std::vector<double> next(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double x = s[i] - alpha * grad[i];
    if (!std::isfinite(x))
      throw NonFiniteError("start time of task '" + net.task(i).id +
                           "' became non-finite (step size too large?)");
    next[i] = std::max(0.0, x);
  }
  return Schedule(std::move(next));
}

/// Forward pass in topological order lifting every start to its predecessors'
/// latest finish. Never moves a start earlier.
inline Schedule repair_schedule(const ProjectNetwork& net, const Schedule& s) {
  check_dimension(net, s);
  std::vector<double> starts = s.starts();
  for (std::size_t j : net.topological_order())
    for (std::size_t i : net.predecessors(j))
      starts[j] = std::max(starts[j], starts[i] + net.duration(i));
  return Schedule(std::move(starts));
}

inline SolveResult solve(const ProjectNetwork& net, const EnergyConfig& energy_cfg,
                         const SolverConfig& cfg,
                         const std::optional<Schedule>& initial = std::nullopt) {
  validate(energy_cfg);
  validate(cfg);
  Schedule s = initial ? *initial : Schedule::zeros(net.size());
  check_dimension(net, s);

  SolveResult r;
  int quiet = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    Schedule next;
    try {
      next = solve_step(net, s, energy_cfg, cfg.alpha);
    } catch (const NonFiniteError& e) {
      throw NonFiniteError(std::string(e.what()) + " at iteration " + std::to_string(it + 1));
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      delta = std::max(delta, std::abs(next[i] - s[i]));
    s = std::move(next);
    r.iterations = it + 1;
    if (cfg.record_trace) r.energy_trace.push_back(total_energy(net, s, energy_cfg));
    quiet = delta < cfg.tol ? quiet + 1 : 0;
    if (quiet >= cfg.tol_window) {
      r.converged = true;
      break;
    }
  }

  r.raw_violation = violation_mass(net, s);
  r.raw_makespan = makespan(net, s);
  r.raw_schedule = s;
  if (cfg.repair) {
    r.schedule = repair_schedule(net, s);
    r.repaired = true;
  } else {
    r.schedule = std::move(s);
  }
  r.violation = violation_mass(net, r.schedule);
  r.makespan = makespan(net, r.schedule);
  r.final_energy = total_energy(net, r.schedule, energy_cfg);
  return r;
}

}  // namespace hopsched
