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

// Schedule checking and metrics by plain arithmetic over a Schedule. Nothing
// here looks at a MILP model, so a bug in the model builder shows up as a
// disagreement instead of being reproduced.

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "shuffleopt/coflow_sched.hpp"
#include "shuffleopt/topology.hpp"
#include "shuffleopt/traffic.hpp"

namespace shuffleopt::metrics {

struct Violation {
  std::string tag;       // relation family, e.g. "link_capacity"
  std::string location;  // e.g. "link 3->7 w0 t2"
  double magnitude = 0.0;
};

struct Bounds {
  double M_lb = 0.0;  // seconds
  double E_lb = 0.0;  // joules
};

struct MetricsReport {
  double energy_joules = 0.0;
  double completion_s = 0.0;
  std::map<int, double> per_device_energy;  // vertex -> joules
  bool feasible = true;
  std::vector<Violation> violations;
  Bounds bounds;

  double energy_kwh() const { return energy_joules / 3.6e6; }
};

/// Checks conservation, budgets, per-link and per-pair totals, activity
/// flags and, on PON3, the relay and transmit-colour rules. `tol` is
/// absolute, scaled by one plus the size of the limit involved.
MetricsReport verify_schedule(const topo::Topology& t, const traffic::DemandMatrix& dm, const sched::Schedule& s,
                              const sched::SchedParams& p, double tol = 1e-6);

/// Joules per device: D * max power for every active (device, wavelength,
/// slot), plus epsilon times the Gbit a NIC-offload server moves.
std::map<int, double> device_energy(const topo::Topology& t, const sched::Schedule& s, const sched::SchedParams& p);
double energy(const topo::Topology& t, const sched::Schedule& s, const sched::SchedParams& p);

/// Latest D*(t-1) + psi/C over links that carry traffic or are flagged
/// active; 0 for an empty schedule.
double completion_time(const topo::Topology& t, const sched::Schedule& s, const sched::SchedParams& p,
                       double tol = 1e-6);

/// Analytic bounds. M_lb: a server sending V at most D*min(rho, out) per
/// slot needs k = ceil(V / that) slots and still has to push the last slot's
/// remainder through its out-capacity; receivers likewise with in-capacity.
/// E_lb: every sender powers its transmitter for ceil(V / (D*rho)) slots.
Bounds lower_bounds(const topo::Topology& t, const traffic::DemandMatrix& dm, const sched::SchedParams& p);

nlohmann::json to_json(const MetricsReport& r);

}  // namespace shuffleopt::metrics
