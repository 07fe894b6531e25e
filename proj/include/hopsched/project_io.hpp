#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hopsched/energy.hpp"
#include "hopsched/errors.hpp"
#include "hopsched/network.hpp"
#include "hopsched/pert.hpp"

namespace hopsched {

using Json = nlohmann::ordered_json;

/// A project file: the network plus any constraints it declares.
struct ProjectFile {
  ProjectNetwork network;
  std::optional<double> deadline;
  std::optional<double> resource_max;
};

/// Applies file-level constraints on top of a base configuration.
inline EnergyConfig with_overrides(EnergyConfig cfg, const ProjectFile& p) {
  if (p.deadline) cfg.deadline = p.deadline;
  if (p.resource_max) cfg.resource_max = p.resource_max;
  return cfg;
}

namespace detail {

class SchemaCollector {
 public:
  void missing(const std::string& field) { missing_.push_back(field); }
  void invalid(const std::string& msg) { invalid_.push_back(msg); }

  void raise_if_any() const {
    if (missing_.empty() && invalid_.empty()) return;
    std::string msg;
    if (!missing_.empty()) {
      msg = "missing fields:";
      for (const auto& f : missing_) msg += " " + f;
    }
    for (const auto& f : invalid_) {
      if (!msg.empty()) msg += "; ";
      msg += f;
    }
    throw SchemaError(msg);
  }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> invalid_;
};

inline std::optional<double> number_field(const Json& obj, const char* key,
                                          const std::string& where, SchemaCollector& errs) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    errs.invalid(where + "." + key + " must be a number");
    return std::nullopt;
  }
  return it->get<double>();
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
}

}  // namespace detail

/// Reads a project document. Durations missing from tasks are filled from
/// their three-point estimates.
inline ProjectFile project_from_json(const Json& doc) {
  detail::SchemaCollector errs;
  if (!doc.is_object()) throw SchemaError("project document must be a JSON object");

  std::vector<TaskSpec> specs;
  auto tasks_it = doc.find("tasks");
  if (tasks_it == doc.end()) {
    errs.missing("tasks");
  } else if (!tasks_it->is_array()) {
    errs.invalid("tasks must be an array");
  } else {
    for (std::size_t k = 0; k < tasks_it->size(); ++k) {
      const Json& t = (*tasks_it)[k];
      const std::string where = "tasks[" + std::to_string(k) + "]";
      if (!t.is_object()) {
        errs.invalid(where + " must be an object");
        continue;
      }
      TaskSpec spec;
      if (auto id = t.find("id"); id == t.end()) {
        errs.missing(where + ".id");
      } else if (!id->is_string()) {
        errs.invalid(where + ".id must be a string");
      } else {
        spec.id = id->get<std::string>();
      }
      spec.duration = detail::number_field(t, "duration", where, errs);
      spec.demand = detail::number_field(t, "demand", where, errs).value_or(0.0);
      if (auto est = t.find("estimates"); est != t.end()) {
        if (!est->is_object()) {
          errs.invalid(where + ".estimates must be an object");
        } else {
          const std::string ew = where + ".estimates";
          auto o = detail::number_field(*est, "optimistic", ew, errs);
          auto m = detail::number_field(*est, "likely", ew, errs);
          auto p = detail::number_field(*est, "pessimistic", ew, errs);
          if (!est->contains("optimistic")) errs.missing(ew + ".optimistic");
          if (!est->contains("likely")) errs.missing(ew + ".likely");
          if (!est->contains("pessimistic")) errs.missing(ew + ".pessimistic");
          if (o && m && p) {
            spec.estimate = ThreePointEstimate{*o, *m, *p};
            validate(*spec.estimate);
          }
        }
      }
      if (!spec.duration && !t.contains("estimates")) errs.missing(where + ".duration");
      specs.push_back(std::move(spec));
    }
  }

  std::vector<std::pair<std::string, std::string>> edges;
  if (auto e = doc.find("edges"); e != doc.end()) {
    if (!e->is_array()) {
      errs.invalid("edges must be an array");
    } else {
      for (std::size_t k = 0; k < e->size(); ++k) {
        const Json& pair = (*e)[k];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
            !pair[1].is_string()) {
          errs.invalid("edges[" + std::to_string(k) + "] must be a [from, to] pair of task ids");
          continue;
        }
        edges.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
      }
    }
  }

  ProjectFile pf;
  if (auto c = doc.find("constraints"); c != doc.end() && !c->is_null()) {
    if (!c->is_object()) {
      errs.invalid("constraints must be an object");
    } else {
      pf.deadline = detail::number_field(*c, "deadline", "constraints", errs);
      pf.resource_max = detail::number_field(*c, "resource_max", "constraints", errs);
    }
  }
  errs.raise_if_any();

  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& s : specs) seen.emplace(s.id, 0);
  for (const auto& [from, to] : edges) {
    if (!seen.count(from)) errs.invalid("edge references unknown task '" + from + "'");
    if (!seen.count(to)) errs.invalid("edge references unknown task '" + to + "'");
  }
  errs.raise_if_any();

  std::vector<Task> tasks;
  tasks.reserve(specs.size());
  for (const auto& s : specs) tasks.push_back({s.id, resolve_duration(s), s.demand});
  pf.network = build_network(std::move(tasks), edges);

  EnergyConfig probe;
  probe.deadline = pf.deadline;
  probe.resource_max = pf.resource_max;
  try {
    validate(probe);
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("constraints: ") + e.what());
  }
  return pf;
}

inline ProjectFile parse_project(const std::string& text) {
  return project_from_json(detail::parse_json(text));
}

inline ProjectFile load_project(const std::string& path) {
  try {
    return parse_project(detail::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Json project_to_json(const ProjectFile& p) {
  Json doc;
  Json tasks = Json::array();
  const ProjectNetwork& net = p.network;
  for (const Task& t : net.tasks()) {
    Json jt{{"id", t.id}, {"duration", t.duration}};
    if (t.demand != 0.0) jt["demand"] = t.demand;
    tasks.push_back(std::move(jt));
  }
  doc["tasks"] = std::move(tasks);
  Json edges = Json::array();
  for (const Edge& e : net.edges())
    edges.push_back(Json::array({net.task(e.from).id, net.task(e.to).id}));
  doc["edges"] = std::move(edges);
  if (p.deadline || p.resource_max) {
    Json c = Json::object();
    if (p.deadline) c["deadline"] = *p.deadline;
    if (p.resource_max) c["resource_max"] = *p.resource_max;
    doc["constraints"] = std::move(c);
  }
  return doc;
}

inline void save_project(const std::string& path, const ProjectFile& p,
                         const Json& config = Json()) {
  Json doc = project_to_json(p);
  if (!config.is_null()) doc["config"] = config;
  detail::write_file(path, doc.dump(2) + "\n");
}

struct ScheduleDiagnostics {
  double makespan = 0.0;
  double violation = 0.0;
  int iterations = 0;
  bool converged = false;
  bool repaired = false;
  std::optional<double> violation_pre_repair;
  std::optional<double> makespan_pre_repair;
};

inline Json schedule_to_json(const ProjectNetwork& net, const Schedule& s,
                             const ScheduleDiagnostics& d, const Json& config = Json()) {
  check_dimension(net, s);
  Json starts = Json::object();
  for (std::size_t i = 0; i < net.size(); ++i) starts[net.task(i).id] = s[i];
  Json doc{{"starts", std::move(starts)},
           {"makespan", d.makespan},
           {"violation", d.violation},
           {"iterations", d.iterations},
           {"converged", d.converged},
           {"repaired", d.repaired}};
  if (d.violation_pre_repair) doc["violation_pre_repair"] = *d.violation_pre_repair;
  if (d.makespan_pre_repair) doc["makespan_pre_repair"] = *d.makespan_pre_repair;
  if (!config.is_null()) doc["config"] = config;
  return doc;
}

inline void save_schedule(const std::string& path, const ProjectNetwork& net,
                          const Schedule& s, const ScheduleDiagnostics& d,
                          const Json& config = Json()) {
  detail::write_file(path, schedule_to_json(net, s, d, config).dump(2) + "\n");
}

inline Schedule schedule_from_json(const ProjectNetwork& net, const Json& doc) {
  auto it = doc.is_object() ? doc.find("starts") : doc.end();
  if (it == doc.end() || !it->is_object())
    throw SchemaError("missing fields: starts");
  detail::SchemaCollector errs;
  std::vector<double> starts(net.size(), 0.0);
  for (std::size_t i = 0; i < net.size(); ++i) {
    const std::string& id = net.task(i).id;
    auto v = it->find(id);
    if (v == it->end()) {
      errs.missing("starts." + id);
    } else if (!v->is_number()) {
      errs.invalid("starts." + id + " must be a number");
    } else {
      starts[i] = v->get<double>();
    }
  }
  for (const auto& [id, _] : it->items())
    if (!net.contains(id)) errs.invalid("starts names unknown task '" + id + "'");
  errs.raise_if_any();
  return Schedule(std::move(starts));
}

inline Schedule load_schedule(const std::string& path, const ProjectNetwork& net) {
  return schedule_from_json(net, detail::parse_json(detail::read_file(path)));
}

}  // namespace hopsched
