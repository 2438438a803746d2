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


// The shuffleopt command line.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "shuffleopt/awgr_design.hpp"
#include "shuffleopt/branch_and_bound.hpp"
#include "shuffleopt/experiment.hpp"
#include "shuffleopt/external_solver.hpp"
#include "shuffleopt/lp_text.hpp"
#include "shuffleopt/plotdata.hpp"
#include "shuffleopt/topology.hpp"

namespace {

namespace fs = std::filesystem;
using namespace shuffleopt;

constexpr int kFailed = 1;     // the command ran but the answer is negative
constexpr int kBadInput = 2;   // config, file or usage problem

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw topo::ConfigError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

milp::Assignment solve_with(const milp::Model& m, const experiment::SolverChoice& solver, double time_s, double gap) {
  if (solver.cmd) return ext::solve_external(m, *solver.cmd, {time_s, gap});
  bb::BbLimits limits;
  limits.time_s = time_s;
  return bb::solve_milp(m, limits);
}

struct RunArgs {
  std::string config;
  std::string out;
  std::string solver;
  int workers = 0;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  experiment::ExperimentConfig c = experiment::load_config(a.config);
  if (!a.out.empty()) c.output = a.out;
  if (!a.solver.empty()) c.solver = a.solver;
  if (a.workers > 0) c.workers = a.workers;
  c.validate();
  const experiment::SolverChoice s = experiment::resolve_solver(c.solver);
  const std::size_t cells = experiment::plan(c).size();
  std::cerr << cells << " runs, solver " << s.name << ", " << c.workers << " worker(s)\n";
  const auto rows = experiment::run_experiment(c, [&](const std::string& line) {
    if (!a.quiet) std::cerr << line << "\n";
  });
  int failed = 0;
  for (const auto& r : rows) failed += !r.E_joules;
  std::cout << (c.output / "results.csv").string() << "\n";
  if (failed > 0) std::cerr << failed << " run(s) without a verified schedule\n";
  return 0;
}

struct PlotArgs {
  std::string results;
  std::string figure;
  std::string out;
};

int cmd_plot(const PlotArgs& a) {
  const fs::path out = a.out.empty() ? fs::path(a.results).parent_path() / ("plot_" + a.figure) : fs::path(a.out);
  for (const auto& f : plotdata::emit_plotdata(slurp(a.results), a.figure, out)) {
    std::cout << f.path.string() << " " << f.points << "\n";
  }
  return 0;
}

struct AwgrArgs {
  int G = 5;
  std::string out;
  std::string solver = "auto";
  double time_s = 120.0;
};

int cmd_awgr(const AwgrArgs& a) {
  const awgr::AwgrInstance inst = awgr::AwgrInstance::for_groups(a.G);
  const experiment::SolverChoice s = experiment::resolve_solver(a.solver);
  const milp::Model m = awgr::build_awgr_model(inst);
  std::cerr << "AWGR model G=" << a.G << ": " << m.num_variables() << " variables, " << m.num_constraints()
            << " rows, solver " << s.name << "\n";
  const milp::Assignment sol = solve_with(m, s, a.time_s, 1e-9);
  if (!sol.has_solution()) {
    std::cerr << "no wiring found: " << milp::to_string(sol.status) << "\n";
    return kFailed;
  }
  const awgr::AwgrWiring w = awgr::decode_wiring(sol, inst);
  const awgr::WiringReport report = awgr::verify_wiring(w);
  std::ofstream out(a.out, std::ios::binary);
  out << awgr::to_json(w).dump(1) << "\n";
  if (!out) throw std::runtime_error("cannot write " + a.out);
  std::cout << "status " << milp::to_string(sol.status) << "\nconnections " << report.connections << "\n";
  for (const topo::Check& c : report.checks) {
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.passed) std::cout << " expected " << c.expected << " got " << c.actual;
    std::cout << "\n";
  }
  return report.ok() ? 0 : kFailed;
}

struct ValidateArgs {
  std::string topology;
  std::string profile = "paper";
};

int cmd_validate(const ValidateArgs& a) {
  topo::Topology t = fs::exists(a.topology)
                         ? topo::topology_from_json(nlohmann::json::parse(slurp(a.topology)))
                         : topo::build_topology(topo::parse_kind(a.topology), topo::parse_profile(a.profile));
  const topo::ValidationReport r = topo::validate_topology(t);
  std::cout << topo::to_string(t.kind()) << " (" << topo::to_string(t.profile()) << ")\n";
  for (const topo::Check& c : r.checks) {
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.actual;
    if (!c.passed) std::cout << " (expected " << c.expected << ")";
    std::cout << "\n";
  }
  return r.ok() ? 0 : kFailed;
}

struct SolveArgs {
  std::string lp;
  std::string solver = "internal";
  std::string out;
  double time_s = 60.0;
  double gap = 1e-9;
};

int cmd_solve(const SolveArgs& a) {
  const milp::Model m = milp::read_lp(slurp(a.lp));
  const experiment::SolverChoice s = experiment::resolve_solver(a.solver);
  const milp::Assignment sol = solve_with(m, s, a.time_s, a.gap);
  const std::string text = milp::format_solution(m, sol);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(a.out, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + a.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy and completion-time optimisation of shuffle co-flows"};
  app.require_subcommand(1);
  app.footer("External solvers: SHUFFLEOPT_HIGHS (adapter script) and SHUFFLEOPT_CBC (binary) override the "
             "default locations.");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a parameter sweep and write results.csv");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory (overrides the config)");
  run_cmd->add_option("--solver", run.solver, "auto, internal, highs or cbc (overrides the config)");
  run_cmd->add_option("--workers", run.workers, "Concurrent runs (overrides the config)")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--quiet", run.quiet, "No per-run progress lines");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "Write plot series from a results file");
  plot_cmd->add_option("--results", plot.results, "results.csv")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--figure", plot.figure, "volume or skew")->required();
  plot_cmd->add_option("--out", plot.out, "Series directory (default: next to the results)");

  AwgrArgs aw;
  auto* awgr_cmd = app.add_subcommand("awgr", "Design the wiring of a two-AWGR cell");
  awgr_cmd->add_option("--G", aw.G, "Communicating vertices (racks plus OLT port)")->required();
  awgr_cmd->add_option("--out", aw.out, "Wiring JSON")->required();
  awgr_cmd->add_option("--solver", aw.solver, "auto, internal, highs or cbc");
  awgr_cmd->add_option("--time-limit", aw.time_s, "Seconds");

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Check a topology file or a built-in kind");
  val_cmd->add_option("--topology", val.topology, "Topology JSON, or a kind name")->required();
  val_cmd->add_option("--profile", val.profile, "Profile for a kind name: paper or desk");

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an LP file and print the solution");
  solve_cmd->add_option("--lp", sol.lp, "Model in LP format")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--solver", sol.solver, "internal, auto, highs or cbc");
  solve_cmd->add_option("--out", sol.out, "Solution file (default: stdout)");
  solve_cmd->add_option("--time-limit", sol.time_s, "Seconds");
  solve_cmd->add_option("--gap", sol.gap, "Relative gap for external solvers");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*plot_cmd) return cmd_plot(plot);
    if (*awgr_cmd) return cmd_awgr(aw);
    if (*val_cmd) return cmd_validate(val);
    if (*solve_cmd) return cmd_solve(sol);
  } catch (const topo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const plotdata::SchemaError& e) {
    std::cerr << "results error: " << e.what() << "\n";
    return kBadInput;
  } catch (const milp::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "JSON error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kBadInput;
}
