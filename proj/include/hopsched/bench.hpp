#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hopsched/cpm.hpp"
#include "hopsched/energy.hpp"
#include "hopsched/generator.hpp"
#include "hopsched/project_io.hpp"
#include "hopsched/random.hpp"
#include "hopsched/solver.hpp"

namespace hopsched {

inline const std::vector<double>& default_beta_sweep() {
  static const std::vector<double> sweep{0.005, 0.01, 0.05};
  return sweep;
}

/// One benchmark configuration: a generator family plus the constraints
/// applied to every instance. `deadline_factor` sets T_max relative to t_opt.
struct BenchRow {
  GenSpec spec;
  std::optional<double> deadline;
  std::optional<double> deadline_factor;
  std::optional<double> resource_max;
  std::size_t runs = 20;
  std::vector<double> beta_sweep = default_beta_sweep();
};

struct BenchRecord {
  std::uint64_t seed = 0;
  std::size_t n_edges = 0;
  double avg_duration = 0.0;
  std::optional<double> deadline;
  double t_h = 0.0;
  double t_opt = 0.0;
  double v_pre_repair = 0.0;
  double v_post_repair = 0.0;
  double rel_error_pct = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time = 0.0;  // seconds, solve() only
  double beta_used = 0.0;
};

inline double relative_error_pct(double t_h, double t_opt) {
  return 100.0 * (t_h - t_opt) / t_opt;
}

struct Stat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct RowReport {
  BenchRow row;
  std::size_t row_index = 0;
  std::uint64_t seed_base = 0;
  double beta_used = 0.0;
  std::vector<std::pair<double, double>> beta_scores;  // (beta, mean rel err)
  std::vector<BenchRecord> records;
  double n_edges_mean = 0.0;
  double avg_duration_mean = 0.0;
  std::optional<double> deadline_mean;
  Stat t_h, t_opt, v_pre, v_post, rel_err, iterations;
  double feasible_fraction = 0.0;  // instances with v_pre_repair == 0
};

struct BenchOptions {
  SolverConfig solver;
  EnergyConfig energy;  // beta/deadline/resource_max are set per row
  std::uint64_t base_seed = 1;
  unsigned jobs = 1;
};

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(jobs, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

template <class Get>
Stat summarize(const std::vector<BenchRecord>& recs, Get get) {
  Stat s;
  if (recs.empty()) return s;
  s.min = s.max = get(recs.front());
  double sum = 0.0;
  for (const auto& r : recs) {
    double v = get(r);
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(recs.size());
  return s;
}

struct PreparedInstance {
  std::uint64_t seed;
  ProjectNetwork network;
  double t_opt;
};

}  // namespace detail

/// Generates the row's instances, solves each for every beta in the sweep and
/// keeps the beta with the lowest mean post-repair relative error.
inline RowReport run_row(const BenchRow& row, std::size_t row_index, const BenchOptions& opt) {
  if (row.runs < 1) throw ConfigError("runs must be >= 1");
  if (row.beta_sweep.empty()) throw ConfigError("beta sweep must not be empty");
  RowReport rep;
  rep.row = row;
  rep.row_index = row_index;
  rep.seed_base = suite_seed(opt.base_seed, row_index, row.runs, 0);

  std::vector<detail::PreparedInstance> inst(row.runs);
  for (std::size_t k = 0; k < row.runs; ++k) {
    GenSpec g = row.spec;
    g.seed = suite_seed(opt.base_seed, row_index, row.runs, k);
    try {
      ProjectNetwork net = generate(g);
      double t_opt = cpm_forward(net).t_opt;
      inst[k] = {g.seed, std::move(net), t_opt};
    } catch (const Error& e) {
      throw Error(e.kind(), "seed " + std::to_string(g.seed) + ": " + e.what());
    }
  }

  double best_score = 0.0;
  for (double beta : row.beta_sweep) {
    std::vector<BenchRecord> recs(row.runs);
    detail::parallel_for(row.runs, opt.jobs, [&](std::size_t k) {
      const auto& in = inst[k];
      EnergyConfig cfg = opt.energy;
      cfg.beta = beta;
      cfg.deadline = row.deadline;
      if (row.deadline_factor) cfg.deadline = *row.deadline_factor * in.t_opt;
      cfg.resource_max = row.resource_max;
      BenchRecord& r = recs[k];
      r.seed = in.seed;
      r.n_edges = in.network.edges().size();
      double dsum = 0.0;
      for (const Task& t : in.network.tasks()) dsum += t.duration;
      r.avg_duration = dsum / static_cast<double>(in.network.size());
      r.deadline = cfg.deadline;
      r.t_opt = in.t_opt;
      r.beta_used = beta;
      SolveResult res;
      auto t0 = std::chrono::steady_clock::now();
      try {
        res = solve(in.network, cfg, opt.solver);
      } catch (const Error& e) {
        throw Error(e.kind(), "seed " + std::to_string(in.seed) + ": " + e.what());
      }
      r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.t_h = res.makespan;
      r.v_pre_repair = res.raw_violation;
      r.v_post_repair = res.violation;
      r.rel_error_pct = relative_error_pct(r.t_h, r.t_opt);
      r.iterations = res.iterations;
      r.converged = res.converged;
    });
    std::sort(recs.begin(), recs.end(),
              [](const BenchRecord& a, const BenchRecord& b) { return a.seed < b.seed; });
    double score = detail::summarize(recs, [](const BenchRecord& r) { return r.rel_error_pct; }).mean;
    rep.beta_scores.emplace_back(beta, score);
    if (rep.records.empty() || score < best_score) {
      best_score = score;
      rep.beta_used = beta;
      rep.records = std::move(recs);
    }
  }

  const auto& recs = rep.records;
  using R = BenchRecord;
  rep.n_edges_mean = detail::summarize(recs, [](const R& r) { return static_cast<double>(r.n_edges); }).mean;
  rep.avg_duration_mean = detail::summarize(recs, [](const R& r) { return r.avg_duration; }).mean;
  if (recs.front().deadline)
    rep.deadline_mean = detail::summarize(recs, [](const R& r) { return *r.deadline; }).mean;
  rep.t_h = detail::summarize(recs, [](const R& r) { return r.t_h; });
  rep.t_opt = detail::summarize(recs, [](const R& r) { return r.t_opt; });
  rep.v_pre = detail::summarize(recs, [](const R& r) { return r.v_pre_repair; });
  rep.v_post = detail::summarize(recs, [](const R& r) { return r.v_post_repair; });
  rep.rel_err = detail::summarize(recs, [](const R& r) { return r.rel_error_pct; });
  rep.iterations = detail::summarize(recs, [](const R& r) { return static_cast<double>(r.iterations); });
  rep.feasible_fraction =
      static_cast<double>(std::count_if(recs.begin(), recs.end(),
                                        [](const R& r) { return r.v_pre_repair == 0.0; })) /
      static_cast<double>(recs.size());
  return rep;
}

inline std::vector<RowReport> run_table(const std::vector<BenchRow>& rows,
                                        const BenchOptions& opt) {
  std::vector<RowReport> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(run_row(rows[r], r, opt));
  return out;
}

/// Shortest decimal form that reads back to the same double.
inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline const char* kCsvHeader =
    "n_tasks,n_edges,avg_duration,deadline,resource_max,t_h_mean,t_opt_mean,v_pre_mean,"
    "v_post_mean,rel_err_pct_mean,iters_mean,feasible_fraction,beta_used,seed_base,prng";

inline std::string report_csv(const std::vector<RowReport>& reports) {
  std::string out = std::string(kCsvHeader) + "\n";
  auto opt_num = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  for (const auto& r : reports) {
    out += std::to_string(r.row.spec.n_tasks) + "," + format_number(r.n_edges_mean) + "," +
           format_number(r.avg_duration_mean) + "," + opt_num(r.deadline_mean) + "," +
           opt_num(r.row.resource_max) + "," + format_number(r.t_h.mean) + "," +
           format_number(r.t_opt.mean) + "," + format_number(r.v_pre.mean) + "," +
           format_number(r.v_post.mean) + "," + format_number(r.rel_err.mean) + "," +
           format_number(r.iterations.mean) + "," + format_number(r.feasible_fraction) + "," +
           format_number(r.beta_used) + "," + std::to_string(r.seed_base) + "," + kPrngName +
           "\n";
  }
  return out;
}

inline Json solver_config_json(const SolverConfig& s) {
  Json j{{"alpha", s.alpha},         {"max_iters", s.max_iters},
         {"tol", s.tol},             {"tol_window", s.tol_window},
         {"repair", s.repair}};
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

inline Json energy_config_json(const EnergyConfig& e) {
  Json j{{"beta", e.beta},
         {"lambda_deadline", e.lambda_deadline},
         {"lambda_resource", e.lambda_resource},
         {"grid_dt", e.grid_dt}};
  j["deadline"] = e.deadline ? Json(*e.deadline) : Json();
  j["resource_max"] = e.resource_max ? Json(*e.resource_max) : Json();
  return j;
}

inline Json report_json(const std::vector<RowReport>& reports, const BenchOptions& opt,
                        bool include_timing = true) {
  auto opt_json = [](const std::optional<double>& v) { return v ? Json(*v) : Json(); };
  auto stat_json = [](const Stat& s) {
    return Json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
  };
  Json rows = Json::array();
  for (const auto& r : reports) {
    Json row{{"n_tasks", r.row.spec.n_tasks},
             {"n_edges", r.n_edges_mean},
             {"avg_duration", r.avg_duration_mean},
             {"deadline", opt_json(r.deadline_mean)},
             {"resource_max", opt_json(r.row.resource_max)},
             {"t_h_mean", r.t_h.mean},
             {"t_opt_mean", r.t_opt.mean},
             {"v_pre_mean", r.v_pre.mean},
             {"v_post_mean", r.v_post.mean},
             {"rel_err_pct_mean", r.rel_err.mean},
             {"iters_mean", r.iterations.mean},
             {"feasible_fraction", r.feasible_fraction},
             {"beta_used", r.beta_used},
             {"seed_base", r.seed_base},
             {"prng", kPrngName}};
    row["deadline_factor"] = opt_json(r.row.deadline_factor);
    row["runs"] = r.row.runs;
    row["t_h"] = stat_json(r.t_h);
    row["t_opt"] = stat_json(r.t_opt);
    row["v_pre"] = stat_json(r.v_pre);
    row["v_post"] = stat_json(r.v_post);
    row["rel_err_pct"] = stat_json(r.rel_err);
    row["iterations"] = stat_json(r.iterations);
    Json sweep = Json::array();
    for (auto [beta, score] : r.beta_scores)
      sweep.push_back({{"beta", beta}, {"rel_err_pct_mean", score}});
    row["beta_sweep"] = std::move(sweep);
    Json recs = Json::array();
    for (const auto& rec : r.records) {
      Json jr{{"seed", rec.seed},
              {"n_edges", rec.n_edges},
              {"avg_duration", rec.avg_duration},
              {"deadline", opt_json(rec.deadline)},
              {"t_h", rec.t_h},
              {"t_opt", rec.t_opt},
              {"v_pre_repair", rec.v_pre_repair},
              {"v_post_repair", rec.v_post_repair},
              {"rel_error_pct", rec.rel_error_pct},
              {"iterations", rec.iterations},
              {"converged", rec.converged},
              {"beta_used", rec.beta_used}};
      if (include_timing) jr["wall_time"] = rec.wall_time;
      recs.push_back(std::move(jr));
    }
    row["records"] = std::move(recs);
    rows.push_back(std::move(row));
  }
  return Json{{"prng", kPrngName},
              {"base_seed", opt.base_seed},
              {"config",
               {{"solver", solver_config_json(opt.solver)},
                {"energy", energy_config_json(opt.energy)}}},
              {"rows", std::move(rows)}};
}

/// Writes the CSV and JSON reports; an empty path skips that format.
inline void write_report(const std::string& csv_path, const std::string& json_path,
                         const std::vector<RowReport>& reports, const BenchOptions& opt,
                         bool include_timing = true) {
  if (!csv_path.empty()) detail::write_file(csv_path, report_csv(reports));
  if (!json_path.empty())
    detail::write_file(json_path, report_json(reports, opt, include_timing).dump(2) + "\n");
}

/// The five experiment families of the original simulation table.
inline std::vector<BenchRow> table_one_rows(std::size_t runs) {
  auto row = [runs](std::size_t n, std::uint64_t edges, std::optional<double> deadline,
                    bool resource) {
    BenchRow r;
    r.spec.n_tasks = n;
    r.spec.edges = EdgeCount{edges};
    r.spec.duration = {1.0, 10.0};
    if (resource) {
      r.spec.demand = Range{1.0, 3.0};
      r.resource_max = 15.0;
    }
    r.deadline = deadline;
    r.runs = runs;
    return r;
  };
  return {row(100, 290, std::nullopt, false), row(250, 720, std::nullopt, false),
          row(500, 1460, 150.0, false), row(1000, 2900, std::nullopt, true),
          row(1000, 2900, 290.0, true)};
}

struct ScalingPoint {
  std::size_t n_tasks = 0;
  double n_edges = 0.0;
  double wall_time_median = 0.0;
  double iterations_median = 0.0;
};

namespace detail {
inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}
}  // namespace detail

/// Median solve time and iteration count per size, with edges = edges_per_task * n.
inline std::vector<ScalingPoint> scaling_probe(const std::vector<std::size_t>& sizes,
                                               double edges_per_task, std::size_t seeds,
                                               const BenchOptions& opt) {
  if (seeds < 3) throw ConfigError("scaling probe needs at least 3 seeds per size");
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw ConfigError("scaling sizes must be ascending");
  std::vector<ScalingPoint> out;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    std::vector<double> times, iters, edges;
    for (std::size_t k = 0; k < seeds; ++k) {
      GenSpec g;
      g.n_tasks = sizes[s];
      g.edges = EdgeCount{std::min<std::uint64_t>(
          max_pairs(sizes[s]),
          static_cast<std::uint64_t>(std::llround(edges_per_task * static_cast<double>(sizes[s]))))};
      g.seed = suite_seed(opt.base_seed, s, seeds, k);
      ProjectNetwork net = generate(g);
      auto t0 = std::chrono::steady_clock::now();
      SolveResult res = solve(net, opt.energy, opt.solver);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      iters.push_back(res.iterations);
      edges.push_back(static_cast<double>(net.edges().size()));
    }
    out.push_back({sizes[s], detail::median(edges), detail::median(times), detail::median(iters)});
  }
  return out;
}

inline std::string scaling_csv(const std::vector<ScalingPoint>& pts) {
  std::string out = "n_tasks,n_edges,wall_time_median_s,iterations_median\n";
  for (const auto& p : pts)
    out += std::to_string(p.n_tasks) + "," + format_number(p.n_edges) + "," +
           format_number(p.wall_time_median) + "," + format_number(p.iterations_median) + "\n";
  return out;
}

}  // namespace hopsched
