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


// Acceptance run: one PASS/FAIL line per criterion on stdout, progress on
// stderr, exit status 1 if any criterion fails. Scheduling models go to an
// external solver when one is installed and to branch-and-bound otherwise;
// the checks that name branch-and-bound always use it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shuffleopt/awgr_design.hpp"
#include "shuffleopt/branch_and_bound.hpp"
#include "shuffleopt/experiment.hpp"
#include "shuffleopt/external_solver.hpp"
#include "shuffleopt/traffic.hpp"
#include "shuffleopt/verify_metrics.hpp"
#include "support/tiny_corpus.hpp"

namespace {

namespace fs = std::filesystem;
using namespace shuffleopt;
using Clock = std::chrono::steady_clock;
using sched::Objective;
using topo::Kind;
using topo::Profile;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool close(double a, double b, double rel = 1e-6) { return std::abs(a - b) <= rel * (1.0 + std::abs(b)); }

// a <= b up to the solver gap.
bool at_most(double a, double b) { return a <= b + 1e-6 * (1.0 + std::abs(b)); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

void note(const std::string& s) { std::cerr << "  .. " << s << std::endl; }

struct Backend {
  experiment::SolverChoice choice = experiment::resolve_solver("auto");

  milp::Assignment operator()(const milp::Model& m) const {
    if (choice.cmd) return ext::solve_external(m, *choice.cmd, {120.0, 1e-9});
    return bb::solve_milp(m, {});
  }
};

// Every optimal schedule this binary produces, for the oracle and bound checks.
struct OptimalRun {
  std::string label;
  metrics::MetricsReport report;
  double model_E = 0.0;
  double model_M = 0.0;
};

class Acceptance {
 public:
  int run() {
    std::cerr << "scheduling backend: " << backend_.choice.name << "\n";
    std::vector<Verdict> v(10);
    v[0] = timed("awgr_optimality", [&] { return awgr_optimality(); });
    v[1] = timed("topology_counts", [&] { return topology_counts(); });
    v[2] = timed("single_flow_optimum", [&] { return single_flow(); });
    solve_desk_instances();
    v[3] = timed("objective_tradeoff", [&] { return tradeoff(); });
    v[4] = timed("rate_monotonicity", [&] { return rate_monotonicity(); });
    v[6] = timed("solver_cross_check", [&] { return cross_check(); });
    v[8] = timed("skew_totals", [&] { return skew_totals(); });
    v[9] = timed("pon3_beats_spine_leaf", [&] { return pon3_trend(); });
    v[7] = timed("bounds_and_greedy", [&] { return bounds_and_greedy(); });
    v[5] = timed("verifier_oracle", [&] { return verifier_oracle(); });
    int failed = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::cout << (v[i].pass ? "PASS" : "FAIL") << "  C" << i + 1 << " " << v[i].name << ": " << v[i].detail
                << std::endl;
      failed += !v[i].pass;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << 10 - failed << "/10" << std::endl;
    return failed ? 1 : 0;
  }

 private:
  Verdict timed(const std::string& name, const std::function<Verdict()>& f) {
    std::cerr << name << "\n";
    const auto t0 = Clock::now();
    Verdict out;
    try {
      out = f();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    out.name = name;
    out.detail += fmt(" [%.1f s]", seconds_since(t0));
    return out;
  }

  // Solves, verifies and records an optimal run. Returns the report or nullopt.
  std::optional<metrics::MetricsReport> optimum(const std::string& label, const topo::Topology& t,
                                                const traffic::DemandMatrix& dm, const sched::SchedParams& p,
                                                const sched::Backend& solve, double* objective = nullptr) {
    const sched::ScheduleRun run = sched::optimize_schedule(t, dm, p, solve);
    if (run.status != milp::SolveStatus::optimal || !run.schedule) {
      note(label + ": " + std::string(milp::to_string(run.status)));
      non_optimal_.push_back(label);
      return std::nullopt;
    }
    OptimalRun r{label, metrics::verify_schedule(t, dm, *run.schedule, p), *run.schedule->model_energy,
                 *run.schedule->model_completion};
    optimal_.push_back(r);
    if (objective) *objective = run.objective;
    return r.report;
  }

  Verdict awgr_optimality() {
    Verdict out;
    std::string detail;
    bool ok = true;
    auto check = [&](int G, const std::optional<ext::SolverCommand>& cmd, double budget) {
      const awgr::AwgrInstance inst = awgr::AwgrInstance::for_groups(G);
      const auto t0 = Clock::now();
      const milp::Model m = awgr::build_awgr_model(inst);
      const milp::Assignment a = cmd ? ext::solve_external(m, *cmd, {budget, 1e-9}) : bb::solve_milp(m);
      const double secs = seconds_since(t0);
      const std::string who = cmd ? cmd->name : "internal";
      if (a.status != milp::SolveStatus::optimal) {
        ok = false;
        detail += "G=" + std::to_string(G) + " " + who + " " + std::string(milp::to_string(a.status)) + "; ";
        return;
      }
      const awgr::WiringReport rep = awgr::verify_wiring(awgr::decode_wiring(a, inst));
      bool hops_ok = true;
      for (const auto& [pair, h] : rep.hops) hops_ok = hops_ok && (h == 1 || h == 2);
      const int want = G * (G - 1);
      const bool good = std::lround(a.objective_value) == want && std::abs(a.objective_value - want) < 1e-6 &&
                        rep.ok() && hops_ok && static_cast<int>(rep.hops.size()) == want && secs < budget;
      ok = ok && good;
      detail += "G=" + std::to_string(G) + " " + who + " objective " + fmt("%g", a.objective_value) +
                (rep.ok() ? " checks ok" : " checks FAIL") + (hops_ok ? "" : " bad hops") + fmt(" %.1f s; ", secs);
    };
    check(3, std::nullopt, 5.0);
    if (backend_.choice.cmd) {
      check(5, backend_.choice.cmd, 60.0);
    } else {
      ok = false;
      detail += "G=5 needs an external solver and none is installed; ";
    }
    out.pass = ok;
    out.detail = detail;
    return out;
  }

  Verdict topology_counts() {
    struct Row {
      Kind kind;
      int servers, switches, links, wavelengths;
    };
    const std::vector<Row> table = {
        {Kind::fat_tree, 16, 20, 48, 1}, {Kind::spine_leaf, 16, 6, 24, 1}, {Kind::bcube, 16, 8, 32, 1},
        {Kind::dcell, 20, 5, 30, 1},     {Kind::pon3, 16, 7, 64, 4},       {Kind::pon5, 16, 5, 23, 1},
    };
    Verdict out{"", true, ""};
    const auto t0 = Clock::now();
    for (const Row& r : table) {
      const topo::Topology t = topo::build_topology(r.kind, Profile::paper);
      const bool same = t.count_servers() == r.servers && t.count_switches() == r.switches &&
                        t.count_links() == r.links && t.wavelengths() == r.wavelengths;
      if (!same) {
        out.pass = false;
        out.detail += std::string(topo::to_string(r.kind)) + " has " + std::to_string(t.count_servers()) + "/" +
                      std::to_string(t.count_switches()) + "/" + std::to_string(t.count_links()) + "/" +
                      std::to_string(t.wavelengths()) + "; ";
      }
    }
    const double secs = seconds_since(t0);
    out.pass = out.pass && secs < 1.0;
    out.detail += "six kinds match (servers, switches, links, wavelengths)" + fmt(" in %.3f s", secs);
    return out;
  }

  Verdict single_flow() {
    const topo::Topology t = topo::build_topology(Kind::spine_leaf, Profile::desk);
    const std::vector<int>& e = t.task_eligible();
    traffic::DemandMatrix dm;
    dm.entries[{e.front(), e.back()}] = 16.0;
    dm.total_gbits = 16.0;
    sched::SchedParams p = sched::SchedParams::for_topology(t, Objective::min_completion);
    p.rho = 8.0;
    p.D = 1.0;
    const auto t0 = Clock::now();
    const auto r = optimum("single 16 Gbit flow", t, dm, p, [](const milp::Model& m) { return bb::solve_milp(m); });
    const double secs = seconds_since(t0);
    if (!r) return {"", false, "branch-and-bound did not prove optimality"};
    const double M = optimal_.back().model_M;
    return {"", std::abs(M - 1.8) <= 1e-6 && secs < 10.0,
            "M = " + fmt("%.9f", M) + ", verified " + fmt("%.9f", r->completion_s) + fmt(", %.2f s", secs) +
                (secs < 10.0 ? "" : " (over 10 s)")};
  }

  // Pure-objective optima (Q = 0) and the default composite optima on six
  // desk instances, shared by the trade-off and greedy checks.
  struct Desk {
    Kind kind;
    topo::Topology t;
    traffic::DemandMatrix dm;
    std::optional<metrics::MetricsReport> pure[2];  // by objective
    std::optional<double> composite[2];             // optimal objective values at the default Q
  };
  std::vector<Desk> desk_;

  void solve_desk_instances() {
    std::cerr << "desk instances\n";
    for (Kind k : topo::all_kinds()) {
      Desk d{k, topo::build_topology(k, Profile::desk), {}, {}, {}};
      d.dm = traffic::gen_demand_uniform(traffic::place_tasks(d.t, 1), 4.0);
      for (int o = 0; o < 2; ++o) {
        const Objective obj = o == 0 ? Objective::min_energy : Objective::min_completion;
        const std::string label = std::string(topo::to_string(k)) + " " + std::string(sched::to_string(obj));
        sched::SchedParams p = sched::SchedParams::for_topology(d.t, obj);
        double value = 0.0;
        if (optimum(label + " Q=100", d.t, d.dm, p, backend_, &value)) d.composite[o] = value;
        p.Q = 0.0;
        d.pure[o] = optimum(label + " Q=0", d.t, d.dm, p, backend_);
      }
      desk_.push_back(std::move(d));
    }
  }

  Verdict tradeoff() {
    Verdict out{"", true, ""};
    int compared = 0;
    for (const Desk& d : desk_) {
      const std::string name(topo::to_string(d.kind));
      if (!d.pure[0] || !d.pure[1]) {
        out.pass = false;
        out.detail += name + " not solved; ";
        continue;
      }
      const metrics::MetricsReport& e = *d.pure[0];
      const metrics::MetricsReport& m = *d.pure[1];
      const bool ok = at_most(e.energy_joules, m.energy_joules) && at_most(m.completion_s, e.completion_s);
      ++compared;
      if (!ok) {
        out.pass = false;
        out.detail += name + " E " + fmt("%g", e.energy_joules) + " vs " + fmt("%g", m.energy_joules) + ", M " +
                      fmt("%g", m.completion_s) + " vs " + fmt("%g", e.completion_s) + "; ";
      }
    }
    out.pass = out.pass && compared >= 3;
    out.detail += std::to_string(compared) + " desk instances, E(min_energy) <= E(min_completion) and "
                  "M(min_completion) <= M(min_energy)";
    return out;
  }

  Verdict rate_monotonicity() {
    const fs::path dir = fs::temp_directory_path() / "shuffleopt_acceptance_rates";
    fs::remove_all(dir);
    nlohmann::json cfg = {{"topologies", {"spine_leaf", "fat_tree"}},
                          {"objectives", {"min_energy"}},
                          {"rho", {8, 2.8}},
                          {"volumes", {{"start", 1}, {"stop", 10}, {"step", 1}}},
                          {"Q", 0},
                          {"output", dir.string()}};
    const experiment::ExperimentConfig c = experiment::config_from_json(cfg);
    const std::vector<experiment::RunRow> rows = experiment::run_experiment(c);
    Verdict out{"", true, ""};
    int pairs = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const experiment::RunRow& slow = rows[i];
      if (slow.rho != 2.8) continue;
      const experiment::RunRow& fast = rows[i - 10];
      if (!fast.E_joules || !slow.E_joules || fast.solver_status != "optimal" || slow.solver_status != "optimal") {
        out.pass = false;
        out.detail += slow.id + " unsolved; ";
        continue;
      }
      ++pairs;
      if (!at_most(*fast.E_joules, *slow.E_joules)) {
        out.pass = false;
        out.detail += slow.id + fmt(" E %g", *slow.E_joules) + fmt(" < %g; ", *fast.E_joules);
      }
      for (const experiment::RunRow* r : {&fast, &slow}) record_artifacts(dir / "runs" / r->id, r->id);
    }
    out.pass = out.pass && pairs == 20;
    out.detail += std::to_string(pairs) + " volume pairs on spine_leaf and fat_tree, E(2.8) >= E(8)";
    return out;
  }

  // The runner's saved schedule and metrics feed the verifier-oracle count.
  void record_artifacts(const fs::path& run_dir, const std::string& id) {
    std::ifstream sj(run_dir / "schedule.json");
    std::ifstream mj(run_dir / "metrics.json");
    if (!sj || !mj) {
      non_optimal_.push_back(id + " (artifacts missing)");
      return;
    }
    const nlohmann::json s = nlohmann::json::parse(sj);
    const nlohmann::json m = nlohmann::json::parse(mj);
    OptimalRun r;
    r.label = id;
    r.report.energy_joules = m.at("energy_joules").get<double>();
    r.report.completion_s = m.at("completion_s").get<double>();
    r.report.feasible = m.at("feasible").get<bool>();
    r.report.bounds.M_lb = m.at("bounds").at("M_lb").get<double>();
    r.report.bounds.E_lb = m.at("bounds").at("E_lb").get<double>();
    for (const auto& v : m.at("violations")) r.report.violations.push_back({v.at("tag").get<std::string>(), "", 0.0});
    r.model_E = s.value("model_energy", 0.0);
    r.model_M = s.value("model_completion", 0.0);
    optimal_.push_back(std::move(r));
  }

  Verdict cross_check() {
    const std::vector<std::string> names = ext::available_solvers();
    if (names.empty()) return {"", false, "no external solver installed"};
    Verdict out{"", true, ""};
    int agree = 0, enumerated = 0;
    for (int i = 0; i < testing::kTinyCorpusSize; ++i) {
      const milp::Model m = testing::tiny_milp(i);
      const milp::Assignment mine = bb::solve_milp(m);
      const std::optional<double> truth = testing::enumerate_optimum(m);
      if (m.num_binaries() <= 12) {
        ++enumerated;
        const bool same = truth ? mine.status == milp::SolveStatus::optimal && close(mine.objective_value, *truth, 0.0)
                                : mine.status == milp::SolveStatus::infeasible;
        if (!same) {
          out.pass = false;
          out.detail += "instance " + std::to_string(i) + " differs from enumeration; ";
        }
      }
      bool all = true;
      for (const std::string& n : names) {
        const milp::Assignment theirs = ext::solve_external(m, *ext::find_solver(n), {30.0, 1e-9});
        const bool same = theirs.status == mine.status &&
                          (mine.status != milp::SolveStatus::optimal ||
                           std::abs(theirs.objective_value - mine.objective_value) <= 1e-6);
        if (!same) {
          all = false;
          out.detail += "instance " + std::to_string(i) + " vs " + n + "; ";
        }
      }
      agree += all;
    }
    out.pass = out.pass && agree == testing::kTinyCorpusSize && enumerated == testing::kTinyCorpusSize;
    std::string who;
    for (const std::string& n : names) who += (who.empty() ? "" : "+") + n;
    out.detail += std::to_string(agree) + "/50 agree with " + who + ", " + std::to_string(enumerated) +
                  " match enumeration";
    return out;
  }

  Verdict skew_totals() {
    const topo::Topology t = topo::build_topology(Kind::fat_tree, Profile::paper);
    Verdict out{"", true, ""};
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const double total = 1.0 + static_cast<double>((seed * 37) % 120);
      const traffic::DemandMatrix dm = traffic::gen_demand_skewed(traffic::place_tasks(t, seed), total, seed);
      std::vector<double> flows;
      for (const auto& [k, g] : dm.entries) {
        if (!(g >= 0.0)) out.pass = false;
        flows.push_back(g);
      }
      const double rel = std::abs(traffic::compensated_sum(flows) - total) / total;
      worst = std::max(worst, rel);
      if (!(rel <= 1e-9)) out.pass = false;
    }
    out.detail = "100 seeds, worst relative total error " + fmt("%.2e", worst) + ", no negative flows";
    return out;
  }

  Verdict pon3_trend() {
    const auto t0 = Clock::now();
    Verdict out{"", true, ""};
    const topo::Topology pon3 = topo::build_topology(Kind::pon3, Profile::desk);
    const topo::Topology sl = topo::build_topology(Kind::spine_leaf, Profile::desk);
    for (double volume : {4.0, 8.0}) {
      // Same shuffle on both: equal flows between two map and two reduce servers.
      const traffic::DemandMatrix a = traffic::gen_demand_uniform(traffic::place_tasks(pon3, 1), volume);
      const traffic::DemandMatrix b = traffic::gen_demand_uniform(traffic::place_tasks(sl, 1), volume);
      for (Objective o : {Objective::min_energy, Objective::min_completion}) {
        const std::string tag = std::string(sched::to_string(o)) + fmt(" %g Gbit", volume);
        const auto rp = optimum("pon3 " + tag, pon3, a, sched::SchedParams::for_topology(pon3, o), backend_);
        const auto rs = optimum("spine_leaf " + tag, sl, b, sched::SchedParams::for_topology(sl, o), backend_);
        if (!rp || !rs) {
          out.pass = false;
          out.detail += tag + " unsolved; ";
          continue;
        }
        const bool ok = at_most(rp->completion_s, rs->completion_s) && rp->energy_joules < rs->energy_joules;
        out.pass = out.pass && ok;
        out.detail += tag + ": M " + fmt("%g", rp->completion_s) + " vs " + fmt("%g", rs->completion_s) + ", E " +
                      fmt("%g", rp->energy_joules) + " vs " + fmt("%g", rs->energy_joules) + "; ";
      }
    }
    const double secs = seconds_since(t0);
    out.pass = out.pass && secs < 300.0;
    return out;
  }

  Verdict bounds_and_greedy() {
    Verdict out{"", true, ""};
    int bounded = 0;
    for (const OptimalRun& r : optimal_) {
      ++bounded;
      const bool ok = r.report.completion_s >= r.report.bounds.M_lb - 1e-9 &&
                      r.report.energy_joules >= r.report.bounds.E_lb - 1e-9;
      if (!ok) {
        out.pass = false;
        out.detail += r.label + " beats a bound; ";
      }
    }
    int greedy = 0;
    for (const Desk& d : desk_) {
      const std::string name(topo::to_string(d.kind));
      const sched::SchedParams p = sched::SchedParams::for_topology(d.t);
      sched::Schedule g;
      try {
        g = sched::greedy_schedule(d.t, d.dm, p);
      } catch (const sched::SlotsExhausted&) {
        out.pass = false;
        out.detail += name + " greedy ran out of slots; ";
        continue;
      }
      const metrics::MetricsReport r = metrics::verify_schedule(d.t, d.dm, g, p);
      if (!r.feasible || !d.pure[0] || !d.pure[1] || !d.composite[0] || !d.composite[1]) {
        out.pass = false;
        out.detail += name + " incomplete; ";
        continue;
      }
      double weighted = 0.0;  // sum of t * delta
      for (const auto& [k, gb] : g.delta) weighted += std::get<2>(k) * gb;
      const bool ok = at_most(d.pure[0]->energy_joules, r.energy_joules) &&
                      at_most(d.pure[1]->completion_s, r.completion_s) &&
                      at_most(*d.composite[0], r.energy_joules + p.Q * weighted) &&
                      at_most(*d.composite[1], r.completion_s + p.Q * weighted);
      ++greedy;
      if (!ok) {
        out.pass = false;
        out.detail += name + " greedy E " + fmt("%g", r.energy_joules) + " M " + fmt("%g", r.completion_s) + "; ";
      }
    }
    out.pass = out.pass && greedy == 6 && bounded > 0;
    out.detail += std::to_string(bounded) + " optimal runs within bounds, greedy no better than the optimum on " +
                  std::to_string(greedy) + " desk instances";
    return out;
  }

  Verdict verifier_oracle() {
    Verdict out{"", non_optimal_.empty(), ""};
    int clean = 0;
    for (const OptimalRun& r : optimal_) {
      const bool ok = r.report.violations.empty() && r.report.feasible && close(r.report.energy_joules, r.model_E) &&
                      close(r.report.completion_s, r.model_M);
      clean += ok;
      if (!ok) {
        out.pass = false;
        out.detail += r.label + (r.report.violations.empty() ? " disagrees with the model" : " has violations") + "; ";
      }
    }
    for (const std::string& s : non_optimal_) out.detail += s + " not optimal; ";
    out.detail += std::to_string(clean) + "/" + std::to_string(optimal_.size()) +
                  " decoded optima verified clean, E and M match the model";
    return out;
  }

  Backend backend_;
  std::vector<OptimalRun> optimal_;
  std::vector<std::string> non_optimal_;
};

}  // namespace

int main() { return Acceptance{}.run(); }
