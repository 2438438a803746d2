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

// Parameter sweeps over topology, objective, rate cap, shuffle volume and
// skew seed. Each cell builds its own demand from the config alone, solves,
// and is judged by the schedule verifier; the CSV never carries raw solver
// values.
//
// Config file (JSON; unknown keys are rejected):
//
//   topologies  list of kind names, or "all"
//   profile     "desk" (default) or "paper"
//   objectives  list of "min_energy" / "min_completion" (default both)
//   rho         list of Gbps caps (default [8])
//   volumes     {"start", "stop", "step"} in Gbit, or an explicit list;
//               every value must lie in [1, 120]
//   skew        "none" (default), a list of seeds, or {"seeds": [...]}
//   solver      "auto" (default), "internal", "highs" or "cbc"
//   limits      {"time_s", "gap", "max_nodes"}
//   output      directory for results.csv and runs/ (default "results")
//   seed        task placement seed (default 1)
//   workers     cells solved concurrently (default 1)
//   slots, Q    optional overrides of the scheduling parameters

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shuffleopt/coflow_sched.hpp"
#include "shuffleopt/external_solver.hpp"
#include "shuffleopt/topology.hpp"

namespace shuffleopt::experiment {

struct Limits {
  double time_s = 60.0;
  double gap = 1e-9;  // relative, for external solvers
  std::int64_t max_nodes = 200000;
};

struct ExperimentConfig {
  std::vector<topo::Kind> topologies;
  topo::Profile profile = topo::Profile::desk;
  std::vector<sched::Objective> objectives = {sched::Objective::min_energy, sched::Objective::min_completion};
  std::vector<double> rhos = {8.0};
  std::vector<double> volumes;
  std::vector<std::optional<std::uint64_t>> skews = {std::nullopt};  // nullopt: uniform
  std::string solver = "auto";
  Limits limits;
  std::filesystem::path output = "results";
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<int> slots;
  std::optional<double> Q;

  /// Throws topo::ConfigError naming the offending field.
  void validate() const;
};

/// Throws topo::ConfigError on unknown keys, wrong types or bad values.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

/// The backend a config asks for. "auto" takes the first external solver
/// found on this host and falls back to the internal one.
struct SolverChoice {
  std::string name;                       // "internal", "highs" or "cbc"
  std::optional<ext::SolverCommand> cmd;  // set for external solvers
};
SolverChoice resolve_solver(std::string_view name);  // throws topo::ConfigError

struct RunRow {
  std::string id;  // directory name under runs/
  topo::Kind topology = topo::Kind::spine_leaf;
  sched::Objective objective = sched::Objective::min_energy;
  double rho = 0.0;
  double total_gbits = 0.0;
  std::optional<std::uint64_t> skew_seed;
  std::optional<double> E_joules;  // verified; empty when there is no valid schedule
  std::optional<double> M_seconds;
  double M_lb = 0.0;
  double E_lb = 0.0;
  std::string solver_status;  // solver verdict, "rejected" or "error"
  std::optional<double> gap;
  double wall_time = 0.0;
  std::string error;  // not a CSV column; also written to runs/<id>/error.txt
};

/// The sweep cells in CSV order: topology, objective, rho, volume, skew.
std::vector<RunRow> plan(const ExperimentConfig& c);

/// Solves every cell, writes per-run artifacts (model.lp, demand.csv,
/// schedule.json, metrics.json, error.txt as applicable) under
/// output/runs/<id>/ and output/results.csv, and returns the rows. A failing
/// cell is recorded and the sweep goes on. `progress` receives one line per
/// finished cell, from one thread at a time.
std::vector<RunRow> run_experiment(const ExperimentConfig& c,
                                   const std::function<void(const std::string&)>& progress = {});

/// Fixed column order, shared with the plot reader.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const RunRow& r);  // 12 significant digits, no newline

/// `%.12g`; an empty field for a missing value.
std::string format_value(std::optional<double> v);

}  // namespace shuffleopt::experiment
