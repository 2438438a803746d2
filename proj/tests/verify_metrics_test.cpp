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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "shuffleopt/branch_and_bound.hpp"
#include "shuffleopt/external_solver.hpp"
#include "shuffleopt/verify_metrics.hpp"

namespace shuffleopt::metrics {
namespace {

using sched::Schedule;
using sched::SchedParams;
using topo::Kind;
using topo::Profile;

traffic::DemandMatrix single_flow(int s, int d, double gbits) {
  traffic::DemandMatrix dm;
  dm.entries[{s, d}] = gbits;
  dm.total_gbits = gbits;
  return dm;
}

std::set<std::string> tags(const MetricsReport& r) {
  std::set<std::string> out;
  for (const Violation& v : r.violations) out.insert(v.tag);
  return out;
}

const topo::Arc& first_arc_from(const topo::Topology& t, int u) {
  for (const topo::Arc& a : t.arcs()) {
    if (a.u == u) return a;
  }
  throw std::logic_error("vertex without out-arcs");
}

TEST(EnergyTest, OneSwitchOnForTwoSlots) {
  const topo::Topology t = topo::build_topology(Kind::fat_tree, Profile::desk);
  const int sw = t.switches().front();
  ASSERT_DOUBLE_EQ(t.device_power(sw).max_power_watts, 94.33);
  Schedule s;
  s.active_switches = {{sw, 0, 1}, {sw, 0, 2}};
  SchedParams p = SchedParams::for_topology(t);
  EXPECT_NEAR(energy(t, s, p), 188.66, 1e-9);
  EXPECT_EQ(device_energy(t, s, p).size(), 1u);
}

TEST(EnergyTest, NicServerPaysPerGbitMoved) {
  const topo::Topology t = topo::build_topology(Kind::bcube, Profile::desk);
  const int x = t.servers().front();
  ASSERT_EQ(t.device_power(x).power_law, topo::PowerLaw::nic_offload);
  const topo::Arc& out = first_arc_from(t, x);
  Schedule s;
  s.psi[{x, out.v, out.w, 1}] = 2.5;
  s.psi[{out.v, x, out.w, 1}] = 1.5;
  s.active_servers = {{x, out.w, 1}};
  const std::map<int, double> per = device_energy(t, s, SchedParams::for_topology(t));
  EXPECT_NEAR(per.at(x), 14.0 + 14.29 * 4.0, 1e-9);
  EXPECT_NEAR(per.at(x), 71.16, 1e-9);
}

TEST(EnergyTest, SlotLengthScalesOnlyTheFixedPart) {
  const topo::Topology t = topo::build_topology(Kind::bcube, Profile::desk);
  const int x = t.servers().front();
  const topo::Arc& out = first_arc_from(t, x);
  Schedule s;
  s.psi[{x, out.v, out.w, 1}] = 1.0;
  s.active_servers = {{x, out.w, 1}};
  SchedParams p = SchedParams::for_topology(t);
  p.D = 0.25;
  EXPECT_NEAR(energy(t, s, p), 0.25 * 14.0 + 14.29, 1e-9);
}

TEST(EnergyTest, EmptyScheduleCostsNothing) {
  const topo::Topology t = topo::build_topology(Kind::pon3, Profile::desk);
  const SchedParams p = SchedParams::for_topology(t);
  EXPECT_EQ(energy(t, Schedule{}, p), 0.0);
  EXPECT_EQ(completion_time(t, Schedule{}, p), 0.0);
}

TEST(CompletionTest, LoadInThirdSlot) {
  const topo::Topology t = topo::build_topology(Kind::spine_leaf, Profile::desk);
  const topo::Arc& a = t.arcs().front();
  ASSERT_DOUBLE_EQ(a.capacity, 10.0);
  Schedule s;
  s.psi[{a.u, a.v, a.w, 3}] = 2.0;
  EXPECT_NEAR(completion_time(t, s, SchedParams::for_topology(t)), 2.2, 1e-12);
}

TEST(CompletionTest, ActiveIdleLinkStillCounts) {
  const topo::Topology t = topo::build_topology(Kind::spine_leaf, Profile::desk);
  const topo::Arc& a = t.arcs().front();
  Schedule s;
  s.active_links = {{a.u, a.v, a.w, 2}};
  EXPECT_NEAR(completion_time(t, s, SchedParams::for_topology(t)), 1.0, 1e-12);
}

TEST(CompletionTest, SixteenGbitInTwoSlots) {
  const topo::Topology t = topo::build_topology(Kind::spine_leaf, Profile::desk);
  const std::vector<int>& e = t.task_eligible();
  const traffic::DemandMatrix dm = single_flow(e.front(), e.back(), 16.0);
  const SchedParams p = SchedParams::for_topology(t);
  const Schedule s = sched::greedy_schedule(t, dm, p);
  const MetricsReport r = verify_schedule(t, dm, s, p);
  EXPECT_TRUE(r.feasible);
  EXPECT_NEAR(r.completion_s, 1.8, 1e-12);
}

TEST(BoundsTest, ZeroDemandHasZeroBounds) {
  const topo::Topology t = topo::build_topology(Kind::fat_tree);
  const traffic::DemandMatrix dm = traffic::gen_demand_uniform(traffic::place_tasks(t, 1), 0.0);
  const Bounds b = lower_bounds(t, dm, SchedParams::for_topology(t));
  EXPECT_EQ(b.M_lb, 0.0);
  EXPECT_EQ(b.E_lb, 0.0);
}

// A 16 Gbit sender at 8 Gbps per slot needs two slots, and the second
// slot's 8 Gbit still take 0.8 s on a 10 Gbps link.
TEST(BoundsTest, SingleSenderCountsWholeSlots) {
  const topo::Topology t = topo::build_topology(Kind::spine_leaf, Profile::desk);
  const std::vector<int>& e = t.task_eligible();
  const SchedParams p = SchedParams::for_topology(t);
  const Bounds b = lower_bounds(t, single_flow(e.front(), e.back(), 16.0), p);
  EXPECT_NEAR(b.M_lb, 1.8, 1e-12);
  EXPECT_NEAR(b.E_lb, 2.0 * t.device_power(e.front()).max_power_watts, 1e-9);
}

// Each of the six reducers takes in 10 Gbit over one 10 Gbps link.
TEST(BoundsTest, FatTreeUniformShuffleIsReceiverBound) {
  const topo::Topology t = topo::build_topology(Kind::fat_tree);
  const traffic::DemandMatrix dm = traffic::gen_demand_uniform(traffic::place_tasks(t, 1), 60.0);
  EXPECT_NEAR(lower_bounds(t, dm, SchedParams::for_topology(t)).M_lb, 1.0, 1e-12);
}

TEST(BoundsTest, GreedySchedulesNeverBeatTheBounds) {
  int checked = 0;
  for (Kind k : topo::all_kinds()) {
    for (Profile pr : {Profile::desk, Profile::paper}) {
      const topo::Topology t = topo::build_topology(k, pr);
      const SchedParams p = SchedParams::for_topology(t);
      for (std::uint64_t seed : {2u, 9u, 31u}) {
        const traffic::Placement place = traffic::place_tasks(t, seed);
        const traffic::DemandMatrix dm =
            traffic::gen_demand_skewed(place, pr == Profile::desk ? 4.0 : 30.0, seed);
        Schedule s;
        try {
          s = sched::greedy_schedule(t, dm, p);
        } catch (const sched::SlotsExhausted&) {
          continue;  // a tight instance greedy cannot pack
        }
        ++checked;
        const MetricsReport r = verify_schedule(t, dm, s, p);
        EXPECT_TRUE(r.feasible) << topo::to_string(k) << " " << r.violations.front().tag;
        EXPECT_GE(r.completion_s, r.bounds.M_lb - 1e-9) << topo::to_string(k);
        EXPECT_GE(r.energy_joules, r.bounds.E_lb - 1e-9) << topo::to_string(k);
      }
    }
  }
  EXPECT_GE(checked, 33);
}

class ViolationTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const std::vector<int>& e = t.task_eligible();
    dm = single_flow(e.front(), e.back(), 8.0);
    s = sched::greedy_schedule(t, dm, p);
    ASSERT_TRUE(verify_schedule(t, dm, s, p).feasible);
  }
  topo::Topology t = topo::build_topology(Kind::spine_leaf, Profile::desk);
  SchedParams p = SchedParams::for_topology(t);
  traffic::DemandMatrix dm;
  Schedule s;
};

TEST_F(ViolationTest, OverfullLinkReportsTheOverflow) {
  p.rho = 20.0;
  dm.entries.begin()->second = 12.0;
  for (auto& [k, g] : s.chi) g = 12.0;
  for (auto& [k, g] : s.psi) g = 12.0;
  for (auto& [k, g] : s.delta) g = 12.0;
  const MetricsReport r = verify_schedule(t, dm, s, p);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(tags(r), std::set<std::string>{"link_capacity"});
  EXPECT_EQ(r.violations.size(), s.psi.size());
  for (const Violation& v : r.violations) EXPECT_NEAR(v.magnitude, 2.0, 1e-12);
}

TEST_F(ViolationTest, EgressAboveRho) {
  p.rho = 6.0;
  EXPECT_EQ(tags(verify_schedule(t, dm, s, p)), std::set<std::string>{"server_egress"});
}

TEST_F(ViolationTest, SwitchIngressAboveSigma) {
  p.sigma = 5.0;
  EXPECT_EQ(tags(verify_schedule(t, dm, s, p)), std::set<std::string>{"switch_ingress"});
}

TEST_F(ViolationTest, LinkLoadMismatch) {
  s.psi.begin()->second += 0.5;
  EXPECT_TRUE(tags(verify_schedule(t, dm, s, p)).count("link_load"));
}

TEST_F(ViolationTest, BrokenConservation) {
  s.chi.erase(std::prev(s.chi.end()));
  const std::set<std::string> found = tags(verify_schedule(t, dm, s, p));
  EXPECT_TRUE(found.count("flow_conservation"));
  EXPECT_TRUE(found.count("link_load"));
}

TEST_F(ViolationTest, ShortDemand) {
  dm.entries.begin()->second = 9.0;
  EXPECT_EQ(tags(verify_schedule(t, dm, s, p)), std::set<std::string>{"demand_total"});
}

TEST_F(ViolationTest, BusyLinkMarkedIdle) {
  s.active_links.clear();
  EXPECT_EQ(tags(verify_schedule(t, dm, s, p)), std::set<std::string>{"link_on"});
  s = sched::greedy_schedule(t, dm, p);
  s.active_servers.clear();
  s.active_switches.clear();
  EXPECT_EQ(tags(verify_schedule(t, dm, s, p)), (std::set<std::string>{"server_on", "switch_on"}));
}

TEST_F(ViolationTest, KeysOutsideTheInstance) {
  Schedule bad = s;
  bad.delta[{std::get<0>(bad.delta.begin()->first), std::get<1>(bad.delta.begin()->first), 9}] = 0.0;
  EXPECT_TRUE(tags(verify_schedule(t, dm, bad, p)).count("slot_range"));
  bad = s;
  bad.psi[{0, 0, 0, 1}] = 1.0;
  EXPECT_TRUE(tags(verify_schedule(t, dm, bad, p)).count("unknown_arc"));
  bad = s;
  bad.active_switches.insert({t.servers().front(), 0, 1});
  EXPECT_TRUE(tags(verify_schedule(t, dm, bad, p)).count("unknown_device"));
  bad = s;
  bad.psi.begin()->second = -1.0;
  EXPECT_TRUE(tags(verify_schedule(t, dm, bad, p)).count("nonnegative"));
}

TEST(OpticalRulesTest, RelayingServerIsFlagged) {
  const topo::Topology t = topo::build_topology(Kind::pon3, Profile::desk);
  const std::vector<int>& e = t.task_eligible();
  const traffic::DemandMatrix dm = single_flow(e[0], e[1], 1.0);
  const SchedParams p = SchedParams::for_topology(t);
  Schedule s = sched::greedy_schedule(t, dm, p);
  ASSERT_TRUE(verify_schedule(t, dm, s, p).feasible);
  const int relay = e.back();
  const topo::Arc& a = first_arc_from(t, relay);
  s.chi[{e[0], e[1], a.u, a.v, a.w, 1}] = 0.5;
  EXPECT_TRUE(tags(verify_schedule(t, dm, s, p)).count("no_server_relay"));
}

TEST(OpticalRulesTest, TwoColoursOnOnePortAreFlagged) {
  const topo::Topology t = topo::build_topology(Kind::pon3, Profile::desk);
  const SchedParams p = SchedParams::for_topology(t);
  const int x = t.task_eligible().front();
  std::map<int, std::vector<int>> by_port;
  for (const topo::Arc& a : t.arcs()) {
    if (a.u == x && t.vertex(a.v).kind == topo::VertexKind::awgr_in_port) by_port[a.v].push_back(a.w);
  }
  ASSERT_FALSE(by_port.empty());
  const auto& [port, ws] = *by_port.begin();
  ASSERT_GE(ws.size(), 2u);
  Schedule s;
  s.active_links = {{x, port, ws[0], 1}, {x, port, ws[1], 1}};
  EXPECT_TRUE(tags(verify_schedule(t, traffic::DemandMatrix{}, s, p)).count("single_wavelength_tx"));
  s.active_links = {{x, port, ws[0], 1}, {x, port, ws[1], 2}};
  EXPECT_FALSE(tags(verify_schedule(t, traffic::DemandMatrix{}, s, p)).count("single_wavelength_tx"));
}

TEST(OracleTest, OptimaPassAndAgreeWithTheModel) {
  for (Kind k : {Kind::spine_leaf, Kind::fat_tree, Kind::pon5}) {
    const topo::Topology t = topo::build_topology(k, Profile::desk);
    const traffic::DemandMatrix dm = traffic::gen_demand_skewed(traffic::place_tasks(t, 3), 5.0, 3);
    for (sched::Objective o : {sched::Objective::min_energy, sched::Objective::min_completion}) {
      const SchedParams p = SchedParams::for_topology(t, o);
      const sched::ScheduleRun run =
          sched::optimize_schedule(t, dm, p, [](const milp::Model& m) { return bb::solve_milp(m); });
      ASSERT_EQ(run.status, milp::SolveStatus::optimal) << topo::to_string(k);
      const MetricsReport r = verify_schedule(t, dm, *run.schedule, p);
      for (const Violation& v : r.violations) ADD_FAILURE() << v.tag << " " << v.location << " " << v.magnitude;
      const double E = *run.schedule->model_energy;
      const double M = *run.schedule->model_completion;
      EXPECT_NEAR(r.energy_joules, E, 1e-6 * (1.0 + E)) << topo::to_string(k);
      EXPECT_NEAR(r.completion_s, M, 1e-6 * (1.0 + M)) << topo::to_string(k);
      EXPECT_GE(r.completion_s, r.bounds.M_lb - 1e-9);
      EXPECT_GE(r.energy_joules, r.bounds.E_lb - 1e-9);
    }
  }
}

// Dropping the fairness weight re-ranks optima without moving the verified
// energy on these wired networks.
TEST(OracleTest, FairnessWeightLeavesMinimumEnergyAlone) {
  // Without the weight the optimum is highly degenerate, which is slow going
  // for the internal solver.
  const std::vector<std::string> solvers = ext::available_solvers();
  if (solvers.empty()) GTEST_SKIP() << "no external solver installed";
  const ext::SolverCommand cmd = *ext::find_solver(solvers.front());
  for (Kind k : {Kind::spine_leaf, Kind::fat_tree, Kind::bcube}) {
    const topo::Topology t = topo::build_topology(k, Profile::desk);
    const traffic::DemandMatrix dm = traffic::gen_demand_uniform(traffic::place_tasks(t, 1), 4.0);
    SchedParams p = SchedParams::for_topology(t, sched::Objective::min_energy);
    auto verified_energy = [&](const SchedParams& q) {
      const sched::ScheduleRun run = sched::optimize_schedule(
          t, dm, q, [&cmd](const milp::Model& m) { return ext::solve_external(m, cmd, {60.0, 1e-9}); });
      EXPECT_EQ(run.status, milp::SolveStatus::optimal);
      const MetricsReport r = verify_schedule(t, dm, *run.schedule, q);
      EXPECT_TRUE(r.feasible);
      return r.energy_joules;
    };
    const double weighted = verified_energy(p);
    p.Q = 0.0;
    EXPECT_NEAR(verified_energy(p), weighted, 1e-6 * (1.0 + weighted)) << topo::to_string(k);
  }
}

TEST(ReportTest, EnergyIsTheSumOfDevicesAndJsonCarriesEverything) {
  const topo::Topology t = topo::build_topology(Kind::dcell);
  const traffic::DemandMatrix dm = traffic::gen_demand_skewed(traffic::place_tasks(t, 6), 40.0, 6);
  const SchedParams p = SchedParams::for_topology(t);
  const MetricsReport r = verify_schedule(t, dm, sched::greedy_schedule(t, dm, p), p);
  double sum = 0.0;
  for (const auto& [i, j] : r.per_device_energy) sum += j;
  EXPECT_NEAR(r.energy_joules, sum, 1e-9 * r.energy_joules);
  EXPECT_EQ(r.feasible, r.violations.empty());
  EXPECT_NEAR(r.energy_kwh() * 3.6e6, r.energy_joules, 1e-9);
  const nlohmann::json j = to_json(r);
  for (const char* key : {"energy_joules", "energy_kwh", "completion_s", "feasible", "per_device_energy",
                          "violations", "bounds"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_DOUBLE_EQ(j["bounds"]["M_lb"].get<double>(), r.bounds.M_lb);
}

}  // namespace
}  // namespace shuffleopt::metrics
