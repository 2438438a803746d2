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

// Time-slotted routing and scheduling of a shuffle co-flow.
//
// Slots are numbered 1..slots. Per slot, link traffic psi is in Gbit, so
// rates scale by the slot length D: a link carries at most D*C, a server
// sends at most D*rho and a switch takes in at most D*sigma. Flow
// conservation is summed over wavelengths at the source and destination and
// holds per wavelength everywhere else, so a lightpath keeps its colour.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "shuffleopt/milp_model.hpp"
#include "shuffleopt/topology.hpp"
#include "shuffleopt/traffic.hpp"

namespace shuffleopt::sched {

class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The greedy scheduler ran out of slots with demand left over.
class SlotsExhausted : public ScheduleError {
 public:
  using ScheduleError::ScheduleError;
};

/// A solver assignment that does not describe a valid schedule. `family`
/// names the broken relation ("link_load", "demand_total", ...).
class DecodeError : public ScheduleError {
 public:
  DecodeError(std::string family, const std::string& what) : ScheduleError(what), family_(std::move(family)) {}
  const std::string& family() const { return family_; }

 private:
  std::string family_;
};

enum class Objective { min_energy, min_completion };
std::string_view to_string(Objective o);
Objective parse_objective(std::string_view s);  // throws topo::ConfigError

struct SchedParams {
  double D = 1.0;
  int slots = 6;
  double rho = 8.0;
  std::optional<double> sigma;  // overrides every device's switching capacity
  double Q = 100.0;
  Objective objective = Objective::min_energy;
  double L = 5000.0;  // indicator constant on the "at least" side

  /// D from the topology, 6 slots on the paper profile and 3 on the desk one.
  static SchedParams for_topology(const topo::Topology& t, Objective o = Objective::min_energy);
  /// Throws topo::ConfigError on an out-of-range field.
  void validate() const;
};

using LinkSlot = std::tuple<int, int, int, int>;             // u, v, w, t
using FlowLinkSlot = std::tuple<int, int, int, int, int, int>;  // s, d, u, v, w, t
using FlowSlot = std::tuple<int, int, int>;                  // s, d, t
using DeviceSlot = std::tuple<int, int, int>;                // vertex, w, t

struct Schedule {
  std::map<LinkSlot, double> psi;
  std::map<FlowLinkSlot, double> chi;
  std::map<FlowSlot, double> delta;
  std::set<LinkSlot> active_links;
  std::set<DeviceSlot> active_servers;
  std::set<DeviceSlot> active_switches;
  /// Values the solver reported for E and M, when the schedule came from a
  /// model.
  std::optional<double> model_energy;
  std::optional<double> model_completion;

  bool empty() const { return psi.empty() && chi.empty() && delta.empty(); }
};

/// The MILP. Pairs with zero demand get no flow variables. Throws
/// ScheduleError when the demand names a vertex that is not a task-eligible
/// server, or when the total demand is zero (there is nothing to schedule).
milp::Model build_schedule_model(const topo::Topology& t, const traffic::DemandMatrix& dm,
                                 const SchedParams& p);
/// Row family tags used by build_schedule_model.
const std::vector<std::string>& schedule_families();

/// Reads a solver assignment back into a Schedule. Binaries are rounded at
/// 1e-6; throws DecodeError if one is fractional or if link loads or
/// per-pair totals disagree with the flow values.
Schedule decode_schedule(const milp::Assignment& a, const topo::Topology& t, const traffic::DemandMatrix& dm,
                         const SchedParams& p);

/// Largest flows first; in every slot each flow pushes what is left along
/// fewest-hop paths (lowest vertex id, then wavelength, on ties) that still
/// have link, egress and ingress budget. Throws SlotsExhausted when demand
/// remains after the last slot.
Schedule greedy_schedule(const topo::Topology& t, const traffic::DemandMatrix& dm, const SchedParams& p);

using Backend = std::function<milp::Assignment(const milp::Model&)>;

struct ScheduleRun {
  milp::SolveStatus status = milp::SolveStatus::infeasible;
  std::optional<Schedule> schedule;
  double objective = 0.0;
  std::optional<milp::Model> model;  // absent when the demand is zero
};

/// Builds, solves and decodes. Zero demand skips the solver and returns an
/// empty optimal schedule.
ScheduleRun optimize_schedule(const topo::Topology& t, const traffic::DemandMatrix& dm, const SchedParams& p,
                              const Backend& solve);

nlohmann::json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);  // throws ScheduleError

}  // namespace shuffleopt::sched
