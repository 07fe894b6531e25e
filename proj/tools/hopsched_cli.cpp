// hopsched command-line front end: validate, estimate, solve, cpm, generate,
// bench and scaling.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopsched.hpp"

namespace {

using hopsched::Json;

struct EnergyFlags {
  hopsched::EnergyConfig cfg;
  std::optional<double> deadline;
  std::optional<double> resource_max;
};

void bind_solver(CLI::App& app, hopsched::SolverConfig& s) {
  app.add_option("--alpha", s.alpha, "Step size")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--max-iters", s.max_iters, "Iteration budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", s.tol, "Convergence threshold on max |dS|")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-window", s.tol_window, "Consecutive sub-tolerance steps required")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--repair,!--no-repair", s.repair, "Run the feasibility repair pass")
      ->capture_default_str();
}

void bind_energy(CLI::App& app, EnergyFlags& e, bool with_constraints) {
  app.add_option("--beta", e.cfg.beta, "Start-time weight")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--lambda-deadline", e.cfg.lambda_deadline, "Deadline penalty multiplier")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--lambda-resource", e.cfg.lambda_resource, "Resource penalty multiplier")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--grid-dt", e.cfg.grid_dt, "Resource profile sampling step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  if (with_constraints) {
    app.add_option("--deadline", e.deadline, "Project deadline T_max (overrides the file)")
        ->check(CLI::PositiveNumber);
    app.add_option("--resource-max", e.resource_max, "Resource cap R_max (overrides the file)")
        ->check(CLI::PositiveNumber);
  }
}

hopsched::EnergyConfig effective_energy(const EnergyFlags& flags,
                                        const hopsched::ProjectFile* project) {
  hopsched::EnergyConfig cfg = flags.cfg;
  if (project) cfg = hopsched::with_overrides(cfg, *project);
  if (flags.deadline) cfg.deadline = flags.deadline;
  if (flags.resource_max) cfg.resource_max = flags.resource_max;
  return cfg;
}

Json config_json(const hopsched::SolverConfig& s, const hopsched::EnergyConfig& e) {
  return Json{{"solver", hopsched::solver_config_json(s)},
              {"energy", hopsched::energy_config_json(e)}};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    hopsched::detail::write_file(path, text);
  }
}

std::string num(double x) { return hopsched::format_number(x); }

int run_validate(const std::string& path) {
  auto p = hopsched::load_project(path);
  std::cout << "ok: " << p.network.size() << " tasks, " << p.network.edges().size()
            << " edges\n";
  return 0;
}

int run_estimate(const std::string& path, const std::string& out) {
  auto p = hopsched::load_project(path);
  Json durations = Json::object();
  for (const auto& t : p.network.tasks()) durations[t.id] = t.duration;
  emit(Json{{"durations", std::move(durations)}}.dump(2) + "\n", out);
  return 0;
}

int run_cpm(const std::string& path, const std::string& out) {
  auto p = hopsched::load_project(path);
  const auto& net = p.network;
  auto r = hopsched::cpm(net);
  Json tasks = Json::object();
  for (std::size_t i = 0; i < net.size(); ++i) {
    tasks[net.task(i).id] = Json{{"earliest_start", r.earliest_start[i]},
                                 {"latest_start", r.latest_start[i]},
                                 {"slack", r.slack[i]}};
  }
  Json doc{{"t_opt", r.t_opt},
           {"critical_path", hopsched::path_ids(net, r.critical_path)},
           {"tasks", std::move(tasks)}};
  emit(doc.dump(2) + "\n", out);
  return 0;
}

struct SolveArgs {
  std::string project;
  std::string out;
  std::string init;
  std::string trace;
  bool print_config = false;
};

int run_solve(const SolveArgs& a, hopsched::SolverConfig scfg, const EnergyFlags& ef) {
  if (a.print_config) {
    std::optional<hopsched::ProjectFile> p;
    if (!a.project.empty()) p = hopsched::load_project(a.project);
    std::cout << config_json(scfg, effective_energy(ef, p ? &*p : nullptr)).dump(2) << "\n";
    return 0;
  }
  auto p = hopsched::load_project(a.project);
  const auto& net = p.network;
  auto ecfg = effective_energy(ef, &p);
  std::optional<hopsched::Schedule> init;
  if (!a.init.empty()) init = hopsched::load_schedule(a.init, net);
  scfg.record_trace = !a.trace.empty();

  auto r = hopsched::solve(net, ecfg, scfg, init);

  std::cout << "T_H=" << num(r.makespan) << " V_pre=" << num(r.raw_violation)
            << " V_post=" << num(r.violation) << " iterations=" << r.iterations
            << " converged=" << (r.converged ? "true" : "false") << "\n";

  hopsched::ScheduleDiagnostics d;
  d.makespan = r.makespan;
  d.violation = r.violation;
  d.iterations = r.iterations;
  d.converged = r.converged;
  d.repaired = r.repaired;
  d.violation_pre_repair = r.raw_violation;
  d.makespan_pre_repair = r.raw_makespan;
  Json doc = hopsched::schedule_to_json(net, r.schedule, d, config_json(scfg, ecfg));
  if (!a.out.empty()) hopsched::detail::write_file(a.out, doc.dump(2) + "\n");

  if (!a.trace.empty()) {
    std::string csv = "iteration,precedence,start_sum,deadline,resource,total\n";
    for (std::size_t k = 0; k < r.energy_trace.size(); ++k) {
      const auto& e = r.energy_trace[k];
      csv += std::to_string(k + 1) + "," + num(e.precedence) + "," + num(e.start_sum) + "," +
             num(e.deadline) + "," + num(e.resource) + "," + num(e.total) + "\n";
    }
    hopsched::detail::write_file(a.trace, csv);
  }
  return 0;
}

struct GenerateArgs {
  std::size_t tasks = 0;
  std::optional<std::uint64_t> edges;
  std::optional<double> edge_prob;
  std::uint64_t seed = 1;
  double dur_min = 1.0, dur_max = 10.0;
  std::optional<double> demand_min, demand_max;
  std::optional<double> deadline, resource_max;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  hopsched::GenSpec g;
  g.n_tasks = a.tasks;
  if (a.edge_prob) {
    g.edges = hopsched::EdgeProbability{*a.edge_prob};
  } else {
    g.edges = hopsched::EdgeCount{a.edges.value_or(0)};
  }
  g.duration = {a.dur_min, a.dur_max};
  if (a.demand_min || a.demand_max)
    g.demand = hopsched::Range{a.demand_min.value_or(1.0), a.demand_max.value_or(3.0)};
  g.seed = a.seed;

  hopsched::ProjectFile p{hopsched::generate(g), a.deadline, a.resource_max};
  Json config{{"seed", a.seed},
              {"prng", hopsched::kPrngName},
              {"tasks", a.tasks},
              {"dur_min", a.dur_min},
              {"dur_max", a.dur_max}};
  if (a.edge_prob) {
    config["edge_prob"] = *a.edge_prob;
  } else {
    config["edges"] = a.edges.value_or(0);
  }
  if (g.demand) {
    config["demand_min"] = g.demand->min;
    config["demand_max"] = g.demand->max;
  }
  Json doc = hopsched::project_to_json(p);
  doc["config"] = std::move(config);
  emit(doc.dump(2) + "\n", a.out);
  return 0;
}

struct BenchArgs {
  std::string preset = "table1";
  std::vector<std::size_t> rows;
  std::size_t runs = 20;
  std::uint64_t base_seed = 1;
  std::vector<double> beta_sweep = hopsched::default_beta_sweep();
  unsigned jobs = 1;
  std::string csv = "-";
  std::string json;
  bool no_timing = false;
  // custom row
  std::size_t tasks = 100;
  std::uint64_t edges = 290;
  double dur_min = 1.0, dur_max = 10.0;
  std::optional<double> demand_min, demand_max;
  std::optional<double> deadline_factor;
};

int run_bench(const BenchArgs& a, const hopsched::SolverConfig& scfg, const EnergyFlags& ef) {
  std::vector<hopsched::BenchRow> rows;
  if (a.preset == "table1") {
    auto all = hopsched::table_one_rows(a.runs);
    if (a.rows.empty()) {
      rows = all;
    } else {
      for (std::size_t r : a.rows) {
        if (r < 1 || r > all.size())
          throw hopsched::ConfigError("row index " + std::to_string(r) + " outside 1.." +
                                      std::to_string(all.size()));
        rows.push_back(all[r - 1]);
      }
    }
  } else {
    hopsched::BenchRow row;
    row.spec.n_tasks = a.tasks;
    row.spec.edges = hopsched::EdgeCount{a.edges};
    row.spec.duration = {a.dur_min, a.dur_max};
    if (a.demand_min || a.demand_max)
      row.spec.demand = hopsched::Range{a.demand_min.value_or(1.0), a.demand_max.value_or(3.0)};
    row.deadline = ef.deadline;
    row.deadline_factor = a.deadline_factor;
    row.resource_max = ef.resource_max;
    row.runs = a.runs;
    rows.push_back(row);
  }
  for (auto& r : rows) r.beta_sweep = a.beta_sweep;

  hopsched::BenchOptions opt;
  opt.solver = scfg;
  opt.energy = ef.cfg;
  opt.base_seed = a.base_seed;
  opt.jobs = a.jobs;
  auto reports = hopsched::run_table(rows, opt);
  emit(hopsched::report_csv(reports), a.csv);
  if (!a.json.empty())
    emit(hopsched::report_json(reports, opt, !a.no_timing).dump(2) + "\n", a.json);
  return 0;
}

struct ScalingArgs {
  std::vector<std::size_t> sizes{100, 200, 400};
  double edges_per_task = 2.9;
  std::size_t seeds = 3;
  std::uint64_t base_seed = 1;
  std::string csv = "-";
};

int run_scaling(const ScalingArgs& a, const hopsched::SolverConfig& scfg,
                const EnergyFlags& ef) {
  hopsched::BenchOptions opt;
  opt.solver = scfg;
  opt.energy = ef.cfg;
  opt.base_seed = a.base_seed;
  emit(hopsched::scaling_csv(hopsched::scaling_probe(a.sizes, a.edges_per_task, a.seeds, opt)),
       a.csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-minimisation project scheduler with a CPM baseline"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string project_path, out_path;

  auto* validate = app.add_subcommand("validate", "Check a project file");
  validate->add_option("project", project_path, "Project JSON")->required();

  auto* estimate = app.add_subcommand("estimate", "Print resolved task durations");
  estimate->add_option("project", project_path, "Project JSON")->required();
  estimate->add_option("--out", out_path, "Output file (default stdout)");

  auto* cpm = app.add_subcommand("cpm", "Critical path analysis");
  cpm->add_option("project", project_path, "Project JSON")->required();
  cpm->add_option("--out", out_path, "Output file (default stdout)");

  SolveArgs solve_args;
  hopsched::SolverConfig solve_cfg;
  EnergyFlags solve_energy;
  auto* solve = app.add_subcommand("solve", "Run the energy-descent scheduler");
  solve->add_option("project", solve_args.project, "Project JSON");
  solve->add_option("--out", solve_args.out, "Schedule output file");
  solve->add_option("--init", solve_args.init, "Initial schedule file");
  solve->add_option("--trace", solve_args.trace, "Write per-iteration energy CSV");
  solve->add_flag("--print-config", solve_args.print_config, "Print the effective configuration");
  bind_solver(*solve, solve_cfg);
  bind_energy(*solve, solve_energy, true);

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Write a random project network");
  generate->add_option("--tasks", gen_args.tasks, "Number of tasks")->required()->check(CLI::PositiveNumber);
  auto* edges_opt = generate->add_option("--edges", gen_args.edges, "Exact edge count");
  generate->add_option("--edge-prob", gen_args.edge_prob, "Per-pair edge probability")
      ->excludes(edges_opt)
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gen_args.seed, "PRNG seed")->capture_default_str();
  generate->add_option("--dur-min", gen_args.dur_min)->capture_default_str();
  generate->add_option("--dur-max", gen_args.dur_max)->capture_default_str();
  generate->add_option("--demand-min", gen_args.demand_min);
  generate->add_option("--demand-max", gen_args.demand_max);
  generate->add_option("--deadline", gen_args.deadline)->check(CLI::PositiveNumber);
  generate->add_option("--resource-max", gen_args.resource_max)->check(CLI::PositiveNumber);
  generate->add_option("--out", gen_args.out, "Output file (default stdout)");

  BenchArgs bench_args;
  hopsched::SolverConfig bench_cfg;
  EnergyFlags bench_energy;
  auto* bench = app.add_subcommand("bench", "Solver-versus-CPM benchmark table");
  bench->add_option("--preset", bench_args.preset, "table1 or custom")
      ->capture_default_str()
      ->check(CLI::IsMember({"table1", "custom"}));
  bench->add_option("--rows", bench_args.rows, "1-based preset rows to run (default all)");
  bench->add_option("--runs", bench_args.runs, "Instances per row")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--base-seed", bench_args.base_seed)->capture_default_str();
  bench->add_option("--beta-sweep", bench_args.beta_sweep, "Beta values to try")->capture_default_str();
  bench->add_option("--jobs", bench_args.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--csv", bench_args.csv, "CSV output ('-' for stdout)")->capture_default_str();
  bench->add_option("--json", bench_args.json, "JSON output");
  bench->add_flag("--no-timing", bench_args.no_timing, "Omit wall times from JSON");
  bench->add_option("--tasks", bench_args.tasks, "custom: tasks")->capture_default_str();
  bench->add_option("--edges", bench_args.edges, "custom: edge count")->capture_default_str();
  bench->add_option("--dur-min", bench_args.dur_min)->capture_default_str();
  bench->add_option("--dur-max", bench_args.dur_max)->capture_default_str();
  bench->add_option("--demand-min", bench_args.demand_min);
  bench->add_option("--demand-max", bench_args.demand_max);
  bench->add_option("--deadline-factor", bench_args.deadline_factor, "custom: T_max = factor * t_opt")
      ->check(CLI::PositiveNumber);
  bind_solver(*bench, bench_cfg);
  bind_energy(*bench, bench_energy, true);

  ScalingArgs scaling_args;
  hopsched::SolverConfig scaling_cfg;
  EnergyFlags scaling_energy;
  auto* scaling = app.add_subcommand("scaling", "Wall time versus network size");
  scaling->add_option("--sizes", scaling_args.sizes)->capture_default_str();
  scaling->add_option("--edges-per-task", scaling_args.edges_per_task)->capture_default_str();
  scaling->add_option("--seeds", scaling_args.seeds)->capture_default_str();
  scaling->add_option("--base-seed", scaling_args.base_seed)->capture_default_str();
  scaling->add_option("--csv", scaling_args.csv)->capture_default_str();
  bind_solver(*scaling, scaling_cfg);
  bind_energy(*scaling, scaling_energy, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return run_validate(project_path);
    if (*estimate) return run_estimate(project_path, out_path);
    if (*cpm) return run_cpm(project_path, out_path);
    if (*solve) {
      if (solve_args.project.empty() && !solve_args.print_config) {
        std::cerr << "error: usage: solve requires a project file\n";
        return 2;
      }
      return run_solve(solve_args, solve_cfg, solve_energy);
    }
    if (*generate) return run_generate(gen_args);
    if (*bench) return run_bench(bench_args, bench_cfg, bench_energy);
    if (*scaling) return run_scaling(scaling_args, scaling_cfg, scaling_energy);
  } catch (const hopsched::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
