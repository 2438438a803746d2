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

#include "shuffleopt/coflow_sched.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace shuffleopt::sched {
namespace {

using milp::LinearConstraint;
using milp::Model;
using milp::Sense;
using milp::Term;
using milp::VarId;
using milp::VarKind;
using topo::Arc;
using topo::ConfigError;
using topo::Topology;
using topo::VertexKind;

constexpr double kRoundTol = 1e-6;
constexpr double kKeep = 1e-9;  // smaller continuous values are dropped on decode

const std::vector<std::string> kFamilies = {
    "flow_conservation", "server_egress",     "switch_ingress",  "link_capacity",    "link_load",
    "demand_total",      "server_load",       "server_on_lower", "server_on_upper",  "switch_load",
    "switch_on_lower",   "switch_on_upper",   "link_on_lower",   "link_on_upper",    "finish_gate",
    "finish_cap",        "finish_floor",      "completion_lower", "completion_upper", "last_link",
    "energy_total",      "no_server_relay",   "single_wavelength_tx",
};

std::string w_t(int w, int t) { return "_w" + std::to_string(w) + "_t" + std::to_string(t); }

// Vertices, arcs and variable handles of one model.
struct Layout {
  const Topology* topo = nullptr;
  int T = 0;
  std::vector<Arc> arcs;
  std::map<int, std::vector<int>> out_arcs, in_arcs;  // vertex -> arc indices
  std::map<int, std::set<int>> colours;               // vertex -> wavelengths with an incident arc
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> demand;

  std::vector<VarId> psi, gamma, tau, z;  // [a * T + t - 1]
  std::vector<VarId> chi;                 // [(p * A + a) * T + t - 1]
  std::vector<VarId> delta;               // [p * T + t - 1]
  std::map<DeviceSlot, VarId> beta, B, alpha, A;
  VarId E, M;

  std::size_t at(int a, int t) const { return static_cast<std::size_t>(a) * T + t - 1; }
  std::size_t flow_at(int p, int a, int t) const {
    return (static_cast<std::size_t>(p) * arcs.size() + a) * T + t - 1;
  }
  double completion_big_m(double D) const { return D * T + D; }
};

double sigma_of(const Topology& t, int v, const SchedParams& p) {
  if (p.sigma) return *p.sigma;
  return t.device_power(v).switching_gbps;
}

Layout make_layout(const Topology& t, const traffic::DemandMatrix& dm, const SchedParams& p) {
  Layout L;
  L.topo = &t;
  L.T = p.slots;
  L.arcs = t.arcs();
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    const Arc& arc = L.arcs[a];
    L.out_arcs[arc.u].push_back(static_cast<int>(a));
    L.in_arcs[arc.v].push_back(static_cast<int>(a));
    L.colours[arc.u].insert(arc.w);
    L.colours[arc.v].insert(arc.w);
  }
  const std::set<int> eligible(t.task_eligible().begin(), t.task_eligible().end());
  for (const auto& [key, gbits] : dm.entries) {
    if (!eligible.count(key.first) || !eligible.count(key.second) || key.first == key.second) {
      throw ScheduleError("demand pair " + std::to_string(key.first) + "->" + std::to_string(key.second) +
                          " is not between two task-eligible servers");
    }
    if (!(gbits >= 0.0)) throw ScheduleError("negative demand");
    if (gbits <= 0.0) continue;
    L.pairs.push_back(key);
    L.demand.push_back(gbits);
  }
  return L;
}

struct Built {
  Layout layout;
  Model model;
};

Built build(const Topology& t, const traffic::DemandMatrix& dm, const SchedParams& p) {
  p.validate();
  Built b{make_layout(t, dm, p), Model{}};
  Layout& L = b.layout;
  Model& m = b.model;
  if (L.pairs.empty()) throw ScheduleError("total demand is zero; there is nothing to schedule");

  const int T = L.T;
  const int nA = static_cast<int>(L.arcs.size());
  const int nP = static_cast<int>(L.pairs.size());
  const double D = p.D;
  const double Lc = L.completion_big_m(D);
  double total = 0.0;
  for (double g : L.demand) total += g;

  auto add = [&m](std::string name, VarKind kind, double hi = milp::kInfinity) {
    return m.add_variable({std::move(name), kind, 0.0, kind == VarKind::binary ? 1.0 : hi});
  };
  auto link_name = [](const Arc& a, int t) {
    return std::to_string(a.u) + "_" + std::to_string(a.v) + w_t(a.w, t);
  };

  for (int a = 0; a < nA; ++a) {
    for (int s = 1; s <= T; ++s) {
      const std::string n = link_name(L.arcs[a], s);
      L.psi.push_back(add("psi_" + n, VarKind::continuous));
      L.gamma.push_back(add("gamma_" + n, VarKind::binary));
      L.tau.push_back(add("tau_" + n, VarKind::continuous, Lc));
      L.z.push_back(add("z_" + n, VarKind::binary));
    }
  }
  for (int q = 0; q < nP; ++q) {
    const std::string pn = std::to_string(L.pairs[q].first) + "_" + std::to_string(L.pairs[q].second);
    for (int s = 1; s <= T; ++s) L.delta.push_back(add("delta_" + pn + "_t" + std::to_string(s), VarKind::continuous));
    for (int a = 0; a < nA; ++a) {
      for (int s = 1; s <= T; ++s) L.chi.push_back(add("chi_" + pn + "_" + link_name(L.arcs[a], s), VarKind::continuous));
    }
  }
  const std::vector<int> servers = t.servers();
  const std::vector<int> switches = t.switches();
  auto device_vars = [&](const std::vector<int>& ids, const char* load, const char* on,
                         std::map<DeviceSlot, VarId>& load_vars, std::map<DeviceSlot, VarId>& on_vars) {
    for (int i : ids) {
      auto it = L.colours.find(i);
      if (it == L.colours.end()) continue;
      for (int w : it->second) {
        for (int s = 1; s <= T; ++s) {
          const std::string n = std::to_string(i) + w_t(w, s);
          load_vars.emplace(DeviceSlot{i, w, s}, add(std::string(load) + "_" + n, VarKind::continuous));
          on_vars.emplace(DeviceSlot{i, w, s}, add(std::string(on) + "_" + n, VarKind::binary));
        }
      }
    }
  };
  device_vars(servers, "beta", "B", L.beta, L.B);
  device_vars(switches, "alpha", "A", L.alpha, L.A);
  L.E = add("E", VarKind::continuous);
  L.M = add("M", VarKind::continuous, Lc);

  int serial = 0;
  auto row = [&m, &serial](const std::string& family, std::vector<Term> terms, Sense sense, double rhs) {
    m.add_constraint(LinearConstraint{family + "_" + std::to_string(serial++), std::move(terms), sense, rhs},
                     family);
  };

  // Flow conservation: summed over wavelengths at the endpoints, per
  // wavelength at every other vertex.
  for (int q = 0; q < nP; ++q) {
    const auto [src, dst] = L.pairs[q];
    for (int s = 1; s <= T; ++s) {
      for (const auto& [u, ws] : L.colours) {
        auto flow_terms = [&](int w_only) {
          std::vector<Term> terms;
          for (int a : L.out_arcs[u]) {
            if (w_only < 0 || L.arcs[a].w == w_only) terms.push_back({L.chi[L.flow_at(q, a, s)], 1.0});
          }
          for (int a : L.in_arcs[u]) {
            if (w_only < 0 || L.arcs[a].w == w_only) terms.push_back({L.chi[L.flow_at(q, a, s)], -1.0});
          }
          return terms;
        };
        if (u == src || u == dst) {
          std::vector<Term> terms = flow_terms(-1);
          terms.push_back({L.delta[static_cast<std::size_t>(q) * T + s - 1], u == src ? -1.0 : 1.0});
          row("flow_conservation", std::move(terms), Sense::eq, 0.0);
        } else {
          for (int w : ws) row("flow_conservation", flow_terms(w), Sense::eq, 0.0);
        }
      }
    }
  }
  for (int i : servers) {
    if (!L.out_arcs.count(i)) continue;
    for (int s = 1; s <= T; ++s) {
      std::vector<Term> terms;
      for (int a : L.out_arcs[i]) terms.push_back({L.psi[L.at(a, s)], 1.0});
      row("server_egress", std::move(terms), Sense::le, D * p.rho);
    }
  }
  for (int i : switches) {
    const double sigma = sigma_of(t, i, p);
    if (!L.in_arcs.count(i) || sigma <= 0.0) continue;
    for (int s = 1; s <= T; ++s) {
      std::vector<Term> terms;
      for (int a : L.in_arcs[i]) terms.push_back({L.psi[L.at(a, s)], 1.0});
      row("switch_ingress", std::move(terms), Sense::le, D * sigma);
    }
  }
  for (int a = 0; a < nA; ++a) {
    const double C = L.arcs[a].capacity;
    for (int s = 1; s <= T; ++s) {
      const VarId psi = L.psi[L.at(a, s)];
      const VarId gamma = L.gamma[L.at(a, s)];
      const VarId tau = L.tau[L.at(a, s)];
      row("link_capacity", {{psi, 1.0}}, Sense::le, D * C);
      std::vector<Term> load = {{psi, 1.0}};
      for (int q = 0; q < nP; ++q) load.push_back({L.chi[L.flow_at(q, a, s)], -1.0});
      row("link_load", std::move(load), Sense::eq, 0.0);
      row("link_on_lower", {{psi, p.L}, {gamma, -1.0}}, Sense::ge, 0.0);
      row("link_on_upper", {{psi, 1.0}, {gamma, -D * C}}, Sense::le, 0.0);
      row("finish_gate", {{tau, 1.0}, {gamma, -Lc}}, Sense::le, 0.0);
      row("finish_cap", {{tau, 1.0}, {psi, -1.0 / C}}, Sense::le, D * (s - 1));
      row("finish_floor", {{tau, 1.0}, {psi, -1.0 / C}, {gamma, -Lc}}, Sense::ge, D * (s - 1) - Lc);
    }
  }
  for (int q = 0; q < nP; ++q) {
    std::vector<Term> terms;
    for (int s = 1; s <= T; ++s) terms.push_back({L.delta[static_cast<std::size_t>(q) * T + s - 1], 1.0});
    row("demand_total", std::move(terms), Sense::eq, L.demand[q]);
  }
  auto device_rows = [&](const std::map<DeviceSlot, VarId>& load_vars, const std::map<DeviceSlot, VarId>& on_vars,
                         const std::string& prefix) {
    for (const auto& [key, load] : load_vars) {
      const auto [i, w, s] = key;
      std::vector<Term> terms = {{load, 1.0}};
      double reach = 0.0;
      for (int a : L.out_arcs[i]) {
        if (L.arcs[a].w != w) continue;
        terms.push_back({L.psi[L.at(a, s)], -1.0});
        reach += D * L.arcs[a].capacity;
      }
      for (int a : L.in_arcs[i]) {
        if (L.arcs[a].w != w) continue;
        terms.push_back({L.psi[L.at(a, s)], -1.0});
        reach += D * L.arcs[a].capacity;
      }
      row(prefix + "_load", std::move(terms), Sense::eq, 0.0);
      const VarId on = on_vars.at(key);
      row(prefix + "_on_lower", {{load, p.L}, {on, -1.0}}, Sense::ge, 0.0);
      row(prefix + "_on_upper", {{load, 1.0}, {on, -std::min(reach, 2.0 * total)}}, Sense::le, 0.0);
    }
  };
  device_rows(L.beta, L.B, "server");
  device_rows(L.alpha, L.A, "switch");
  {
    std::vector<Term> terms;
    std::vector<Term> last;
    for (int a = 0; a < nA; ++a) {
      for (int s = 1; s <= T; ++s) {
        const VarId tau = L.tau[L.at(a, s)];
        const VarId z = L.z[L.at(a, s)];
        row("completion_lower", {{L.M, 1.0}, {tau, -1.0}}, Sense::ge, 0.0);
        row("completion_upper", {{L.M, 1.0}, {tau, -1.0}, {z, Lc}}, Sense::le, Lc);
        last.push_back({z, 1.0});
      }
    }
    row("last_link", std::move(last), Sense::eq, 1.0);

    terms.push_back({L.E, 1.0});
    for (const auto& [key, on] : L.B) {
      const topo::DeviceSpec& dev = t.device_power(std::get<0>(key));
      terms.push_back({on, -D * dev.max_power_watts});
      // Power uses the rate beta / D, so energy over the slot is eps * beta.
      if (dev.power_law == topo::PowerLaw::nic_offload) terms.push_back({L.beta.at(key), -dev.epsilon_w_per_gbps});
    }
    for (const auto& [key, on] : L.A) {
      terms.push_back({on, -D * t.device_power(std::get<0>(key)).max_power_watts});
    }
    row("energy_total", std::move(terms), Sense::eq, 0.0);
  }

  if (t.kind() == topo::Kind::pon3) {
    const std::set<int> server_set(servers.begin(), servers.end());
    for (int q = 0; q < nP; ++q) {
      const int src = L.pairs[q].first;
      std::map<int, std::vector<int>> by_colour;
      for (int a = 0; a < nA; ++a) {
        if (server_set.count(L.arcs[a].u) && L.arcs[a].u != src) by_colour[L.arcs[a].w].push_back(a);
      }
      for (const auto& [w, arcs] : by_colour) {
        for (int s = 1; s <= T; ++s) {
          std::vector<Term> terms;
          for (int a : arcs) terms.push_back({L.chi[L.flow_at(q, a, s)], 1.0});
          row("no_server_relay", std::move(terms), Sense::le, 0.0);
        }
      }
    }
    for (int i : servers) {
      std::map<int, std::vector<int>> by_port;
      for (int a : L.out_arcs[i]) {
        if (t.vertex(L.arcs[a].v).kind == VertexKind::awgr_in_port) by_port[L.arcs[a].v].push_back(a);
      }
      for (const auto& [port, arcs] : by_port) {
        for (int s = 1; s <= T; ++s) {
          std::vector<Term> terms;
          for (int a : arcs) terms.push_back({L.gamma[L.at(a, s)], 1.0});
          row("single_wavelength_tx", std::move(terms), Sense::le, 1.0);
        }
      }
    }
  }

  std::vector<Term> objective = {{p.objective == Objective::min_energy ? L.E : L.M, 1.0}};
  if (p.Q != 0.0) {
    for (int q = 0; q < nP; ++q) {
      for (int s = 1; s <= T; ++s) objective.push_back({L.delta[static_cast<std::size_t>(q) * T + s - 1], p.Q * s});
    }
  }
  m.set_objective(milp::Direction::minimize, objective,
                  p.objective == Objective::min_energy ? "energy_with_fairness" : "completion_with_fairness");
  return b;
}

bool round_binary(double v, const std::string& name) {
  const double r = std::round(v);
  if (std::abs(v - r) > kRoundTol || (r != 0.0 && r != 1.0)) {
    throw DecodeError("integrality", "binary " + name + " has value " + std::to_string(v));
  }
  return r == 1.0;
}

// Activity sets implied by link traffic.
void mark_activity(const Topology& t, Schedule& s) {
  const std::vector<int> servers = t.servers();
  const std::vector<int> switches = t.switches();
  const std::set<int> server_set(servers.begin(), servers.end());
  const std::set<int> switch_set(switches.begin(), switches.end());
  for (const auto& [key, g] : s.psi) {
    if (g <= 0.0) continue;
    const auto [u, v, w, slot] = key;
    s.active_links.insert(key);
    for (int x : {u, v}) {
      if (server_set.count(x)) s.active_servers.insert({x, w, slot});
      if (switch_set.count(x)) s.active_switches.insert({x, w, slot});
    }
  }
}

}  // namespace

std::string_view to_string(Objective o) {
  return o == Objective::min_energy ? "min_energy" : "min_completion";
}

Objective parse_objective(std::string_view s) {
  if (s == "min_energy") return Objective::min_energy;
  if (s == "min_completion") return Objective::min_completion;
  throw ConfigError("unknown objective '" + std::string(s) + "'");
}

SchedParams SchedParams::for_topology(const Topology& t, Objective o) {
  SchedParams p;
  p.D = t.slot_seconds();
  p.slots = t.profile() == topo::Profile::paper ? 6 : 3;
  p.objective = o;
  return p;
}

void SchedParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(D)) throw ConfigError("slot length must be positive");
  if (slots < 1 || slots > 6) throw ConfigError("slot count must be between 1 and 6");
  if (!positive(rho)) throw ConfigError("server rate must be positive");
  if (sigma && !positive(*sigma)) throw ConfigError("switch rate must be positive");
  if (!std::isfinite(Q) || Q < 0.0) throw ConfigError("fairness weight must be >= 0");
  if (!positive(L)) throw ConfigError("indicator constant must be positive");
}

const std::vector<std::string>& schedule_families() { return kFamilies; }

milp::Model build_schedule_model(const Topology& t, const traffic::DemandMatrix& dm, const SchedParams& p) {
  return build(t, dm, p).model;
}

Schedule decode_schedule(const milp::Assignment& a, const Topology& t, const traffic::DemandMatrix& dm,
                         const SchedParams& p) {
  const Built b = build(t, dm, p);
  const Layout& L = b.layout;
  const Model& m = b.model;
  if (a.values.size() != m.num_variables()) {
    throw DecodeError("shape", "assignment has " + std::to_string(a.values.size()) + " values, model has " +
                                   std::to_string(m.num_variables()));
  }
  auto val = [&a](VarId v) { return a.values[v.index]; };
  Schedule s;
  const int nA = static_cast<int>(L.arcs.size());
  const int nP = static_cast<int>(L.pairs.size());
  for (int q = 0; q < nP; ++q) {
    const auto [src, dst] = L.pairs[q];
    double sum = 0.0;
    for (int slot = 1; slot <= L.T; ++slot) {
      const double d = val(L.delta[static_cast<std::size_t>(q) * L.T + slot - 1]);
      sum += d;
      if (d > kKeep) s.delta[{src, dst, slot}] = d;
      for (int k = 0; k < nA; ++k) {
        const double x = val(L.chi[L.flow_at(q, k, slot)]);
        const Arc& arc = L.arcs[k];
        if (x > kKeep) s.chi[{src, dst, arc.u, arc.v, arc.w, slot}] = x;
      }
    }
    if (std::abs(sum - L.demand[q]) > kRoundTol * (1.0 + L.demand[q])) {
      throw DecodeError("demand_total", "pair " + std::to_string(src) + "->" + std::to_string(dst) + " sends " +
                                            std::to_string(sum) + " of " + std::to_string(L.demand[q]));
    }
  }
  for (int k = 0; k < nA; ++k) {
    const Arc& arc = L.arcs[k];
    for (int slot = 1; slot <= L.T; ++slot) {
      const double psi = val(L.psi[L.at(k, slot)]);
      double sum = 0.0;
      for (int q = 0; q < nP; ++q) sum += val(L.chi[L.flow_at(q, k, slot)]);
      if (std::abs(psi - sum) > kRoundTol) {
        throw DecodeError("link_load", "link " + std::to_string(arc.u) + "->" + std::to_string(arc.v) + w_t(arc.w, slot) +
                                           " carries " + std::to_string(psi) + " but its flows add to " +
                                           std::to_string(sum));
      }
      if (psi > kKeep) s.psi[{arc.u, arc.v, arc.w, slot}] = psi;
      const VarId g = L.gamma[L.at(k, slot)];
      if (round_binary(val(g), m.variable(g).name)) s.active_links.insert({arc.u, arc.v, arc.w, slot});
      round_binary(val(L.z[L.at(k, slot)]), m.variable(L.z[L.at(k, slot)]).name);
    }
  }
  for (const auto& [key, v] : L.B) {
    if (round_binary(val(v), m.variable(v).name)) s.active_servers.insert(key);
  }
  for (const auto& [key, v] : L.A) {
    if (round_binary(val(v), m.variable(v).name)) s.active_switches.insert(key);
  }
  s.model_energy = val(L.E);
  s.model_completion = val(L.M);
  return s;
}

Schedule greedy_schedule(const Topology& t, const traffic::DemandMatrix& dm, const SchedParams& p) {
  p.validate();
  const Layout L = make_layout(t, dm, p);
  const bool pon3 = t.kind() == topo::Kind::pon3;
  const int W = t.wavelengths();
  const std::vector<int> switches = t.switches();
  std::map<int, double> sigma;
  for (int i : switches) {
    const double s = sigma_of(t, i, p);
    if (s > 0.0) sigma[i] = s;
  }

  std::map<int, std::vector<int>> out_arcs = L.out_arcs;  // visited by head vertex, then wavelength
  for (auto& [u, arcs] : out_arcs) {
    std::stable_sort(arcs.begin(), arcs.end(), [&L](int a, int b) {
      return std::pair(L.arcs[a].v, L.arcs[a].w) < std::pair(L.arcs[b].v, L.arcs[b].w);
    });
  }

  std::vector<int> order(L.pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&L](int a, int b) { return L.demand[a] > L.demand[b]; });
  std::vector<double> left = L.demand;

  Schedule out;
  for (int slot = 1; slot <= L.T; ++slot) {
    std::vector<double> link_left(L.arcs.size());
    for (std::size_t a = 0; a < L.arcs.size(); ++a) link_left[a] = p.D * L.arcs[a].capacity;
    std::map<int, double> egress_left, ingress_left;
    for (int i : t.servers()) egress_left[i] = p.D * p.rho;
    for (const auto& [i, s] : sigma) ingress_left[i] = p.D * s;
    std::map<std::pair<int, int>, int> tx_colour;  // (server, input port) -> wavelength in use

    for (int q : order) {
      const auto [src, dst] = L.pairs[q];
      while (left[q] > kKeep) {
        // Breadth-first search over (vertex, wavelength) states.
        std::map<std::pair<int, int>, int> via;  // state -> arc used to reach it
        std::deque<std::pair<int, int>> queue;
        for (int w = 0; w < W; ++w) {
          via[{src, w}] = -1;
          queue.emplace_back(src, w);
        }
        int reached = -1;
        while (!queue.empty() && reached < 0) {
          const auto [u, w] = queue.front();
          queue.pop_front();
          if (u == dst) continue;
          if (t.is_server(u) && (egress_left[u] <= kKeep || (pon3 && u != src))) continue;
          auto it = out_arcs.find(u);
          if (it == out_arcs.end()) continue;
          for (int a : it->second) {
            const Arc& arc = L.arcs[a];
            if (arc.w != w || link_left[a] <= kKeep || via.count({arc.v, w})) continue;
            if (ingress_left.count(arc.v) && ingress_left[arc.v] <= kKeep) continue;
            if (pon3 && t.is_server(u) && t.vertex(arc.v).kind == VertexKind::awgr_in_port) {
              auto c = tx_colour.find({u, arc.v});
              if (c != tx_colour.end() && c->second != w) continue;
            }
            via[{arc.v, w}] = a;
            if (arc.v == dst) {
              reached = a;
              break;
            }
            queue.emplace_back(arc.v, w);
          }
        }
        if (reached < 0) break;

        std::vector<int> path;
        for (int a = reached; a >= 0; a = via.at({L.arcs[a].u, L.arcs[a].w})) path.push_back(a);
        std::reverse(path.begin(), path.end());
        double amount = left[q];
        for (int a : path) {
          const Arc& arc = L.arcs[a];
          amount = std::min(amount, link_left[a]);
          if (t.is_server(arc.u)) amount = std::min(amount, egress_left[arc.u]);
          if (ingress_left.count(arc.v)) amount = std::min(amount, ingress_left[arc.v]);
        }
        for (int a : path) {
          const Arc& arc = L.arcs[a];
          link_left[a] -= amount;
          if (t.is_server(arc.u)) egress_left[arc.u] -= amount;
          if (ingress_left.count(arc.v)) ingress_left[arc.v] -= amount;
          if (pon3 && t.is_server(arc.u) && t.vertex(arc.v).kind == VertexKind::awgr_in_port) {
            tx_colour[{arc.u, arc.v}] = arc.w;
          }
          out.chi[{src, dst, arc.u, arc.v, arc.w, slot}] += amount;
          out.psi[{arc.u, arc.v, arc.w, slot}] += amount;
        }
        out.delta[{src, dst, slot}] += amount;
        left[q] -= amount;
      }
    }
  }
  for (std::size_t q = 0; q < L.pairs.size(); ++q) {
    if (left[q] > kKeep) {
      throw SlotsExhausted("greedy schedule leaves " + std::to_string(left[q]) + " Gbit of " +
                           std::to_string(L.pairs[q].first) + "->" + std::to_string(L.pairs[q].second) +
                           " after " + std::to_string(L.T) + " slots");
    }
  }
  mark_activity(t, out);
  return out;
}

ScheduleRun optimize_schedule(const Topology& t, const traffic::DemandMatrix& dm, const SchedParams& p,
                              const Backend& solve) {
  p.validate();
  ScheduleRun run;
  bool any = false;
  for (const auto& [k, g] : dm.entries) any = any || g > 0.0;
  if (!any) {
    make_layout(t, dm, p);  // endpoint checks still apply
    run.status = milp::SolveStatus::optimal;
    run.schedule = Schedule{};
    run.schedule->model_energy = 0.0;
    run.schedule->model_completion = 0.0;
    return run;
  }
  run.model = build_schedule_model(t, dm, p);
  const milp::Assignment a = solve(*run.model);
  run.status = a.status;
  run.objective = a.objective_value;
  if (a.status == milp::SolveStatus::optimal || a.status == milp::SolveStatus::feasible) {
    run.schedule = decode_schedule(a, t, dm, p);
  }
  return run;
}

nlohmann::json to_json(const Schedule& s) {
  nlohmann::json j;
  j["flows"] = nlohmann::json::array();
  for (const auto& [k, g] : s.chi) {
    const auto [src, dst, u, v, w, t] = k;
    j["flows"].push_back({{"s", src}, {"d", dst}, {"u", u}, {"v", v}, {"w", w}, {"t", t}, {"gbits", g}});
  }
  j["links"] = nlohmann::json::array();
  for (const auto& [k, g] : s.psi) {
    const auto [u, v, w, t] = k;
    j["links"].push_back({{"u", u}, {"v", v}, {"w", w}, {"t", t}, {"gbits", g}});
  }
  j["slots"] = nlohmann::json::array();
  for (const auto& [k, g] : s.delta) {
    const auto [src, dst, t] = k;
    j["slots"].push_back({{"s", src}, {"d", dst}, {"t", t}, {"gbits", g}});
  }
  j["active_links"] = nlohmann::json::array();
  for (const auto& [u, v, w, t] : s.active_links) j["active_links"].push_back({u, v, w, t});
  j["active_servers"] = nlohmann::json::array();
  for (const auto& [i, w, t] : s.active_servers) j["active_servers"].push_back({i, w, t});
  j["active_switches"] = nlohmann::json::array();
  for (const auto& [i, w, t] : s.active_switches) j["active_switches"].push_back({i, w, t});
  if (s.model_energy) j["model_energy"] = *s.model_energy;
  if (s.model_completion) j["model_completion"] = *s.model_completion;
  return j;
}

Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  try {
    for (const auto& f : j.at("flows")) {
      s.chi[{f.at("s").get<int>(), f.at("d").get<int>(), f.at("u").get<int>(), f.at("v").get<int>(),
             f.at("w").get<int>(), f.at("t").get<int>()}] = f.at("gbits").get<double>();
    }
    for (const auto& f : j.at("links")) {
      s.psi[{f.at("u").get<int>(), f.at("v").get<int>(), f.at("w").get<int>(), f.at("t").get<int>()}] =
          f.at("gbits").get<double>();
    }
    for (const auto& f : j.at("slots")) {
      s.delta[{f.at("s").get<int>(), f.at("d").get<int>(), f.at("t").get<int>()}] = f.at("gbits").get<double>();
    }
    for (const auto& e : j.at("active_links")) {
      s.active_links.insert({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(), e.at(3).get<int>()});
    }
    for (const auto& e : j.at("active_servers")) {
      s.active_servers.insert({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    }
    for (const auto& e : j.at("active_switches")) {
      s.active_switches.insert({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    }
    if (j.contains("model_energy")) s.model_energy = j.at("model_energy").get<double>();
    if (j.contains("model_completion")) s.model_completion = j.at("model_completion").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ScheduleError(std::string("schedule document: ") + e.what());
  }
  return s;
}

}  // namespace shuffleopt::sched
