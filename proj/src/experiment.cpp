// Copyright 2026 The shuffleopt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shuffleopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "shuffleopt/branch_and_bound.hpp"
#include "shuffleopt/lp_text.hpp"
#include "shuffleopt/traffic.hpp"
#include "shuffleopt/verify_metrics.hpp"

namespace shuffleopt::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using topo::ConfigError;

constexpr double kMinVolume = 1.0;
constexpr double kMaxVolume = 120.0;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double number_field(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite");
  return v;
}

std::int64_t integer_field(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return j.get<std::int64_t>();
}

std::uint64_t seed_field(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError("'" + key + "' must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(j.get<std::int64_t>());
}

std::string string_field(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

const json& array_field(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be a list");
  return j;
}

std::vector<double> volume_sweep(const json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const json& v : j) out.push_back(number_field(v, "volumes"));
    return out;
  }
  if (!j.is_object()) throw ConfigError("'volumes' must be a list or {start, stop, step}");
  for (const auto& [k, v] : j.items()) {
    if (k != "start" && k != "stop" && k != "step") throw ConfigError("unknown key 'volumes." + k + "'");
  }
  for (const char* k : {"start", "stop", "step"}) {
    if (!j.contains(k)) throw ConfigError(std::string("'volumes' needs '") + k + "'");
  }
  const double start = number_field(j["start"], "volumes.start");
  const double stop = number_field(j["stop"], "volumes.stop");
  const double step = number_field(j["step"], "volumes.step");
  if (step <= 0.0) throw ConfigError("'volumes.step' must be positive");
  if (stop < start) throw ConfigError("'volumes.stop' is below 'volumes.start'");
  const double slack = 1e-9 * step;
  for (int i = 0; start + i * step <= stop + slack; ++i) out.push_back(start + i * step);
  return out;
}

std::vector<std::optional<std::uint64_t>> skew_list(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "none") throw ConfigError("'skew' must be \"none\" or a list of seeds");
    return {std::nullopt};
  }
  const json* seeds = &j;
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k != "seeds") throw ConfigError("unknown key 'skew." + k + "'");
    }
    if (!j.contains("seeds")) throw ConfigError("'skew' needs 'seeds'");
    seeds = &j["seeds"];
  }
  std::vector<std::optional<std::uint64_t>> out;
  for (const json& s : array_field(*seeds, "skew.seeds")) out.push_back(seed_field(s, "skew.seeds"));
  return out;
}

Limits limits_from(const json& j) {
  if (!j.is_object()) throw ConfigError("'limits' must be an object");
  Limits l;
  for (const auto& [k, v] : j.items()) {
    if (k == "time_s") {
      l.time_s = number_field(v, "limits.time_s");
    } else if (k == "gap") {
      l.gap = number_field(v, "limits.gap");
    } else if (k == "max_nodes") {
      l.max_nodes = integer_field(v, "limits.max_nodes");
    } else {
      throw ConfigError("unknown key 'limits." + k + "'");
    }
  }
  return l;
}

std::string run_id(std::size_t index, const RunRow& r) {
  char head[16];
  std::snprintf(head, sizeof head, "%04zu", index + 1);
  std::string id = std::string(head) + "_" + std::string(topo::to_string(r.topology)) + "_" +
                   std::string(sched::to_string(r.objective)) + "_rho" + short_number(r.rho) + "_v" +
                   short_number(r.total_gbits) + "_" +
                   (r.skew_seed ? "seed" + std::to_string(*r.skew_seed) : std::string("uniform"));
  std::replace(id.begin(), id.end(), '.', 'p');
  return id;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

// One sweep cell, start to finish. Exceptions end up in the row.
class Cell {
 public:
  Cell(const ExperimentConfig& c, const SolverChoice& solver, const topo::Topology& t)
      : c_(c), solver_(solver), t_(t) {}

  void run(RunRow& row) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = c_.output / "runs" / row.id;
    try {
      fs::create_directories(dir);
      solve(row, dir);
    } catch (const sched::DecodeError& e) {
      row.solver_status = "rejected";
      row.error = "decode: " + e.family() + ": " + e.what();
    } catch (const std::exception& e) {
      row.solver_status = "error";
      row.error = e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!row.error.empty()) {
      try {
        write_file(dir / "error.txt", row.error + "\n");
      } catch (const std::exception&) {
        // the row still carries the message
      }
    }
  }

 private:
  void solve(RunRow& row, const fs::path& dir) {
    const traffic::Placement place = traffic::place_tasks(t_, c_.seed);
    const traffic::DemandMatrix dm = row.skew_seed ? traffic::gen_demand_skewed(place, row.total_gbits, *row.skew_seed)
                                                   : traffic::gen_demand_uniform(place, row.total_gbits);
    write_file(dir / "demand.csv", traffic::to_csv(dm));

    sched::SchedParams p = sched::SchedParams::for_topology(t_, row.objective);
    p.rho = row.rho;
    if (c_.slots) p.slots = *c_.slots;
    if (c_.Q) p.Q = *c_.Q;
    const metrics::Bounds b = metrics::lower_bounds(t_, dm, p);
    row.M_lb = b.M_lb;
    row.E_lb = b.E_lb;

    bb::BbStats stats;
    bool used_solver = false;
    const sched::Backend backend = [&](const milp::Model& m) {
      used_solver = true;
      write_file(dir / "model.lp", milp::write_lp(m));
      if (solver_.cmd) return ext::solve_external(m, *solver_.cmd, {c_.limits.time_s, c_.limits.gap});
      return bb::solve_milp(m, {c_.limits.max_nodes, c_.limits.time_s, 1e-6}, &stats);
    };
    const sched::ScheduleRun run = sched::optimize_schedule(t_, dm, p, backend);
    row.solver_status = std::string(milp::to_string(run.status));
    if (!used_solver) {
      row.gap = 0.0;
    } else if (!solver_.cmd && run.schedule) {
      row.gap = std::abs(run.objective - stats.best_bound) / std::max(1.0, std::abs(run.objective));
    } else if (solver_.cmd && run.status == milp::SolveStatus::optimal) {
      row.gap = c_.limits.gap;
    }
    if (!run.schedule) return;

    const metrics::MetricsReport r = metrics::verify_schedule(t_, dm, *run.schedule, p);
    write_file(dir / "schedule.json", sched::to_json(*run.schedule).dump(1) + "\n");
    write_file(dir / "metrics.json", metrics::to_json(r).dump(1) + "\n");
    if (!r.feasible) {
      row.solver_status = "rejected";
      row.error = "verifier: " + r.violations.front().tag + " at " + r.violations.front().location;
      return;
    }
    row.E_joules = r.energy_joules;
    row.M_seconds = r.completion_s;
  }

  const ExperimentConfig& c_;
  const SolverChoice& solver_;
  const topo::Topology& t_;
};

}  // namespace

void ExperimentConfig::validate() const {
  if (topologies.empty()) throw ConfigError("'topologies' is empty");
  if (objectives.empty()) throw ConfigError("'objectives' is empty");
  if (rhos.empty()) throw ConfigError("'rho' is empty");
  for (double r : rhos) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("'rho' values must be positive");
  }
  if (volumes.empty()) throw ConfigError("'volumes' is empty");
  for (double v : volumes) {
    if (!(v >= kMinVolume && v <= kMaxVolume)) {
      throw ConfigError("volume " + short_number(v) + " Gbit is outside [1, 120]");
    }
  }
  if (skews.empty()) throw ConfigError("'skew' lists no seeds");
  if (!(limits.time_s > 0.0)) throw ConfigError("'limits.time_s' must be positive");
  if (!(limits.gap >= 0.0)) throw ConfigError("'limits.gap' must be non-negative");
  if (limits.max_nodes <= 0) throw ConfigError("'limits.max_nodes' must be positive");
  if (workers < 1) throw ConfigError("'workers' must be at least 1");
  if (solver != "auto" && solver != "internal" && solver != "highs" && solver != "cbc") {
    throw ConfigError("unknown solver '" + solver + "'");
  }
  if (output.empty()) throw ConfigError("'output' is empty");
  for (topo::Kind k : topologies) {
    sched::SchedParams p = sched::SchedParams::for_topology(topo::build_topology(k, profile));
    if (slots) p.slots = *slots;
    if (Q) p.Q = *Q;
    p.validate();
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  bool have_topologies = false;
  bool have_volumes = false;
  for (const auto& [k, v] : j.items()) {
    if (k == "topologies") {
      have_topologies = true;
      if (v.is_string() && v.get<std::string>() == "all") {
        c.topologies = topo::all_kinds();
      } else {
        for (const json& name : array_field(v, k)) c.topologies.push_back(topo::parse_kind(string_field(name, k)));
      }
    } else if (k == "profile") {
      c.profile = topo::parse_profile(string_field(v, k));
    } else if (k == "objectives") {
      c.objectives.clear();
      for (const json& name : array_field(v, k)) c.objectives.push_back(sched::parse_objective(string_field(name, k)));
    } else if (k == "rho") {
      c.rhos.clear();
      if (v.is_number()) {
        c.rhos.push_back(number_field(v, k));
      } else {
        for (const json& r : array_field(v, k)) c.rhos.push_back(number_field(r, k));
      }
    } else if (k == "volumes") {
      have_volumes = true;
      c.volumes = volume_sweep(v);
    } else if (k == "skew") {
      c.skews = skew_list(v);
    } else if (k == "solver") {
      c.solver = string_field(v, k);
    } else if (k == "limits") {
      c.limits = limits_from(v);
    } else if (k == "output") {
      c.output = string_field(v, k);
    } else if (k == "seed") {
      c.seed = seed_field(v, k);
    } else if (k == "workers") {
      c.workers = static_cast<int>(integer_field(v, k));
    } else if (k == "slots") {
      c.slots = static_cast<int>(integer_field(v, k));
    } else if (k == "Q") {
      c.Q = number_field(v, k);
    } else {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
  if (!have_topologies) throw ConfigError("config needs 'topologies'");
  if (!have_volumes) throw ConfigError("config needs 'volumes'");
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return config_from_json(j);
}

SolverChoice resolve_solver(std::string_view name) {
  if (name == "internal") return {"internal", std::nullopt};
  if (name == "auto") {
    for (const std::string& s : ext::available_solvers()) {
      if (auto cmd = ext::find_solver(s)) return {s, cmd};
    }
    return {"internal", std::nullopt};
  }
  if (name == "highs" || name == "cbc") {
    auto cmd = ext::find_solver(name);
    if (!cmd) throw ConfigError("solver '" + std::string(name) + "' is not installed on this host");
    return {std::string(name), cmd};
  }
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

std::vector<RunRow> plan(const ExperimentConfig& c) {
  std::vector<RunRow> rows;
  for (topo::Kind k : c.topologies) {
    for (sched::Objective o : c.objectives) {
      for (double rho : c.rhos) {
        for (double v : c.volumes) {
          for (const auto& s : c.skews) {
            RunRow r;
            r.topology = k;
            r.objective = o;
            r.rho = rho;
            r.total_gbits = v;
            r.skew_seed = s;
            r.id = run_id(rows.size(), r);
            rows.push_back(std::move(r));
          }
        }
      }
    }
  }
  return rows;
}

std::vector<RunRow> run_experiment(const ExperimentConfig& c,
                                   const std::function<void(const std::string&)>& progress) {
  c.validate();
  const SolverChoice solver = resolve_solver(c.solver);
  std::map<topo::Kind, topo::Topology> nets;
  for (topo::Kind k : c.topologies) nets.emplace(k, topo::build_topology(k, c.profile));

  fs::create_directories(c.output / "runs");
  std::vector<RunRow> rows = plan(c);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::size_t done = 0;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      RunRow& r = rows[i];
      Cell(c, solver, nets.at(r.topology)).run(r);
      if (!progress) continue;
      std::ostringstream line;
      line << r.id << ": " << r.solver_status;
      if (r.E_joules) line << " E=" << format_value(r.E_joules) << " M=" << format_value(r.M_seconds);
      if (!r.error.empty()) line << " (" << r.error << ")";
      std::lock_guard<std::mutex> lock(log_mutex);
      ++done;
      progress("[" + std::to_string(done) + "/" + std::to_string(rows.size()) + "] " + line.str());
    }
  };
  const int n = std::min<int>(c.workers, static_cast<int>(rows.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::string csv = csv_header() + "\n";
  for (const RunRow& r : rows) csv += csv_row(r) + "\n";
  write_file(c.output / "results.csv", csv);
  return rows;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {"topology", "objective", "rho",       "total_gbits",
                                                "skew_seed", "E_joules", "M_seconds", "M_lb",
                                                "E_lb",      "solver_status", "gap", "wall_time"};
  return cols;
}

std::string csv_header() {
  std::string out;
  for (const std::string& col : csv_columns()) out += (out.empty() ? "" : ",") + col;
  return out;
}

std::string format_value(std::optional<double> v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", *v == 0.0 ? 0.0 : *v);
  return buf;
}

std::string csv_row(const RunRow& r) {
  const std::vector<std::string> fields = {
      std::string(topo::to_string(r.topology)),
      std::string(sched::to_string(r.objective)),
      format_value(r.rho),
      format_value(r.total_gbits),
      r.skew_seed ? std::to_string(*r.skew_seed) : "none",
      format_value(r.E_joules),
      format_value(r.M_seconds),
      format_value(r.M_lb),
      format_value(r.E_lb),
      r.solver_status,
      format_value(r.gap),
      format_value(r.wall_time),
  };
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
  return out;
}

}  // namespace shuffleopt::experiment
