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

#include "shuffleopt/verify_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace shuffleopt::metrics {
namespace {

using sched::DeviceSlot;
using sched::LinkSlot;
using topo::Topology;
using topo::VertexKind;

std::string link_at(int u, int v, int w, int t) {
  return "link " + std::to_string(u) + "->" + std::to_string(v) + " w" + std::to_string(w) + " t" +
         std::to_string(t);
}

std::string pair_at(int s, int d) { return "pair " + std::to_string(s) + "->" + std::to_string(d); }

// Slots needed to move `volume` at `per_slot` each, never less than one.
double slots_needed(double volume, double per_slot) {
  return std::max(1.0, std::ceil(volume / per_slot * (1.0 - 1e-12)));
}

class Checker {
 public:
  Checker(const Topology& t, const traffic::DemandMatrix& dm, const sched::Schedule& s, const sched::SchedParams& p,
          double tol)
      : t_(t), dm_(dm), s_(s), p_(p), tol_(tol) {
    for (int i : t.switches()) powered_.insert(i);
  }

  std::vector<Violation> run() {
    check_keys();
    check_link_loads();
    check_totals();
    check_conservation();
    check_budgets();
    check_activity();
    if (t_.kind() == topo::Kind::pon3) check_optical();
    return std::move(out_);
  }

 private:
  void flag(std::string tag, std::string where, double magnitude) {
    out_.push_back({std::move(tag), std::move(where), magnitude});
  }
  bool over(double value, double limit) const { return value > limit + tol_ * (1.0 + std::abs(limit)); }
  bool slot_ok(int t) const { return t >= 1 && t <= p_.slots; }
  bool known_pair(int s, int d) const { return dm_.entries.count({s, d}) > 0; }

  void check_keys() {
    for (const auto& [k, g] : s_.chi) {
      const auto [src, dst, u, v, w, t] = k;
      if (!known_pair(src, dst)) flag("unknown_pair", pair_at(src, dst), g);
      if (!t_.capacity(u, v, w)) flag("unknown_arc", link_at(u, v, w, t), g);
      if (!slot_ok(t)) flag("slot_range", pair_at(src, dst) + " t" + std::to_string(t), g);
      if (g < -tol_) flag("nonnegative", pair_at(src, dst) + " on " + link_at(u, v, w, t), -g);
    }
    for (const auto& [k, g] : s_.psi) {
      const auto [u, v, w, t] = k;
      if (!t_.capacity(u, v, w)) flag("unknown_arc", link_at(u, v, w, t), g);
      if (!slot_ok(t)) flag("slot_range", link_at(u, v, w, t), g);
      if (g < -tol_) flag("nonnegative", link_at(u, v, w, t), -g);
    }
    for (const auto& [k, g] : s_.delta) {
      const auto [src, dst, t] = k;
      if (!known_pair(src, dst)) flag("unknown_pair", pair_at(src, dst), g);
      if (!slot_ok(t)) flag("slot_range", pair_at(src, dst) + " t" + std::to_string(t), g);
      if (g < -tol_) flag("nonnegative", pair_at(src, dst) + " t" + std::to_string(t), -g);
    }
    for (const auto& [u, v, w, t] : s_.active_links) {
      if (!t_.capacity(u, v, w) || !slot_ok(t)) flag("unknown_arc", link_at(u, v, w, t), 1.0);
    }
    for (const auto& [i, w, t] : s_.active_servers) {
      if (!t_.has_vertex(i) || !t_.is_server(i) || !slot_ok(t)) flag("unknown_device", "server " + std::to_string(i), 1.0);
    }
    for (const auto& [i, w, t] : s_.active_switches) {
      if (!powered_.count(i) || !slot_ok(t)) flag("unknown_device", "switch " + std::to_string(i), 1.0);
    }
  }

  void check_link_loads() {
    std::map<LinkSlot, double> sums;
    for (const auto& [k, g] : s_.chi) {
      const auto [src, dst, u, v, w, t] = k;
      sums[{u, v, w, t}] += g;
    }
    std::set<LinkSlot> keys;
    for (const auto& [k, g] : sums) keys.insert(k);
    for (const auto& [k, g] : s_.psi) keys.insert(k);
    for (const LinkSlot& k : keys) {
      const auto it = s_.psi.find(k);
      const double psi = it == s_.psi.end() ? 0.0 : it->second;
      const double gap = std::abs(psi - sums[k]);
      if (gap > tol_ * (1.0 + std::abs(psi))) {
        const auto [u, v, w, t] = k;
        flag("link_load", link_at(u, v, w, t), gap);
      }
    }
  }

  void check_totals() {
    std::map<std::pair<int, int>, double> sent;
    for (const auto& [k, g] : s_.delta) sent[{std::get<0>(k), std::get<1>(k)}] += g;
    for (const auto& [k, want] : dm_.entries) {
      const double gap = std::abs(sent[k] - want);
      if (gap > tol_ * (1.0 + want)) flag("demand_total", pair_at(k.first, k.second), gap);
    }
  }

  void check_conservation() {
    // (s, d, t) -> vertex -> w -> out minus in.
    std::map<std::tuple<int, int, int>, std::map<int, std::map<int, double>>> net;
    for (const auto& [k, g] : s_.chi) {
      const auto [src, dst, u, v, w, t] = k;
      net[{src, dst, t}][u][w] += g;
      net[{src, dst, t}][v][w] -= g;
    }
    for (const auto& [k, g] : s_.delta) net[k];
    for (const auto& [key, vertices] : net) {
      const auto [src, dst, t] = key;
      const auto d = s_.delta.find(key);
      const double released = d == s_.delta.end() ? 0.0 : d->second;
      double at_src = 0.0, at_dst = 0.0;
      for (const auto& [x, by_w] : vertices) {
        for (const auto& [w, g] : by_w) {
          if (x == src) {
            at_src += g;
          } else if (x == dst) {
            at_dst += g;
          } else if (std::abs(g) > tol_) {
            flag("flow_conservation",
                 pair_at(src, dst) + " at " + std::to_string(x) + " w" + std::to_string(w) + " t" + std::to_string(t),
                 std::abs(g));
          }
        }
      }
      const std::string where = pair_at(src, dst) + " t" + std::to_string(t);
      if (std::abs(at_src - released) > tol_ * (1.0 + released)) {
        flag("flow_conservation", where + " at source", std::abs(at_src - released));
      }
      if (std::abs(at_dst + released) > tol_ * (1.0 + released)) {
        flag("flow_conservation", where + " at destination", std::abs(at_dst + released));
      }
    }
  }

  void check_budgets() {
    std::map<std::pair<int, int>, double> egress, ingress;
    for (const auto& [k, g] : s_.psi) {
      const auto [u, v, w, t] = k;
      const auto c = t_.capacity(u, v, w);
      if (c && over(g, p_.D * *c)) flag("link_capacity", link_at(u, v, w, t), g - p_.D * *c);
      if (t_.has_vertex(u) && t_.is_server(u)) egress[{u, t}] += g;
      if (powered_.count(v)) ingress[{v, t}] += g;
    }
    const double out_cap = p_.D * p_.rho;
    for (const auto& [k, g] : egress) {
      if (over(g, out_cap)) flag("server_egress", "server " + std::to_string(k.first) + " t" + std::to_string(k.second), g - out_cap);
    }
    for (const auto& [k, g] : ingress) {
      const double sigma = p_.sigma ? *p_.sigma : t_.device_power(k.first).switching_gbps;
      if (sigma <= 0.0) continue;
      if (over(g, p_.D * sigma)) {
        flag("switch_ingress", "switch " + std::to_string(k.first) + " t" + std::to_string(k.second), g - p_.D * sigma);
      }
    }
  }

  void check_activity() {
    for (const auto& [k, g] : s_.psi) {
      if (g <= tol_) continue;
      const auto [u, v, w, t] = k;
      if (!s_.active_links.count(k)) flag("link_on", link_at(u, v, w, t), g);
      for (int x : {u, v}) {
        if (!t_.has_vertex(x)) continue;
        if (t_.is_server(x) && !s_.active_servers.count({x, w, t})) {
          flag("server_on", "server " + std::to_string(x) + " w" + std::to_string(w) + " t" + std::to_string(t), g);
        }
        if (powered_.count(x) && !s_.active_switches.count({x, w, t})) {
          flag("switch_on", "switch " + std::to_string(x) + " w" + std::to_string(w) + " t" + std::to_string(t), g);
        }
      }
    }
  }

  void check_optical() {
    for (const auto& [k, g] : s_.chi) {
      const auto [src, dst, u, v, w, t] = k;
      if (g > tol_ && u != src && t_.has_vertex(u) && t_.is_server(u)) {
        flag("no_server_relay", pair_at(src, dst) + " via server " + std::to_string(u) + " t" + std::to_string(t), g);
      }
    }
    std::map<std::tuple<int, int, int>, std::set<int>> colours;  // (server, port, slot) -> wavelengths
    auto note = [&](const LinkSlot& k) {
      const auto [u, v, w, t] = k;
      if (t_.has_vertex(u) && t_.is_server(u) && t_.has_vertex(v) && t_.vertex(v).kind == VertexKind::awgr_in_port) {
        colours[{u, v, t}].insert(w);
      }
    };
    for (const auto& [k, g] : s_.psi) {
      if (g > tol_) note(k);
    }
    for (const LinkSlot& k : s_.active_links) note(k);
    for (const auto& [k, ws] : colours) {
      if (ws.size() > 1) {
        const auto [u, port, t] = k;
        flag("single_wavelength_tx",
             "server " + std::to_string(u) + " port " + std::to_string(port) + " t" + std::to_string(t),
             static_cast<double>(ws.size() - 1));
      }
    }
  }

  const Topology& t_;
  const traffic::DemandMatrix& dm_;
  const sched::Schedule& s_;
  const sched::SchedParams& p_;
  double tol_;
  std::set<int> powered_;
  std::vector<Violation> out_;
};

}  // namespace

std::map<int, double> device_energy(const Topology& t, const sched::Schedule& s, const sched::SchedParams& p) {
  std::map<int, double> out;
  auto charge_on = [&](const std::set<DeviceSlot>& active) {
    for (const auto& [i, w, slot] : active) {
      if (!t.has_vertex(i) || t.vertex(i).device.empty()) continue;
      out[i] += p.D * t.device_power(i).max_power_watts;
    }
  };
  charge_on(s.active_servers);
  charge_on(s.active_switches);
  // Power eps * (beta / D) over a slot of length D is eps * beta.
  for (const auto& [k, g] : s.psi) {
    const auto [u, v, w, slot] = k;
    for (int x : {u, v}) {
      if (!t.has_vertex(x) || !t.is_server(x)) continue;
      const topo::DeviceSpec& dev = t.device_power(x);
      if (dev.power_law == topo::PowerLaw::nic_offload) out[x] += dev.epsilon_w_per_gbps * g;
    }
  }
  return out;
}

double energy(const Topology& t, const sched::Schedule& s, const sched::SchedParams& p) {
  std::vector<double> parts;
  for (const auto& [i, j] : device_energy(t, s, p)) parts.push_back(j);
  return traffic::compensated_sum(parts);
}

double completion_time(const Topology& t, const sched::Schedule& s, const sched::SchedParams& p, double tol) {
  double latest = 0.0;
  auto consider = [&](const LinkSlot& k) {
    const auto [u, v, w, slot] = k;
    const auto c = t.capacity(u, v, w);
    if (!c || *c <= 0.0) return;
    const auto it = s.psi.find(k);
    const double psi = it == s.psi.end() ? 0.0 : it->second;
    latest = std::max(latest, p.D * (slot - 1) + psi / *c);
  };
  for (const auto& [k, g] : s.psi) {
    if (g > tol) consider(k);
  }
  for (const LinkSlot& k : s.active_links) consider(k);
  return latest;
}

Bounds lower_bounds(const Topology& t, const traffic::DemandMatrix& dm, const sched::SchedParams& p) {
  std::map<int, double> out_volume, in_volume, out_cap, in_cap;
  for (const auto& [k, g] : dm.entries) {
    if (g <= 0.0) continue;
    out_volume[k.first] += g;
    in_volume[k.second] += g;
  }
  for (const topo::Arc& a : t.arcs()) {
    out_cap[a.u] += a.capacity;
    in_cap[a.v] += a.capacity;
  }
  Bounds b;
  // The last slot's remainder still needs remainder / capacity seconds.
  auto finish = [&p](double volume, double per_slot, double rate) {
    const double k = slots_needed(volume, per_slot);
    return p.D * (k - 1.0) + (volume - per_slot * (k - 1.0)) / rate;
  };
  for (const auto& [s, v] : out_volume) {
    const double c = out_cap[s];
    if (c <= 0.0) continue;
    b.M_lb = std::max(b.M_lb, finish(v, p.D * std::min(p.rho, c), c));
    if (t.has_vertex(s) && !t.vertex(s).device.empty()) {
      b.E_lb += p.D * t.device_power(s).max_power_watts * slots_needed(v, p.D * p.rho);
    }
  }
  for (const auto& [d, v] : in_volume) {
    const double c = in_cap[d];
    if (c > 0.0) b.M_lb = std::max(b.M_lb, finish(v, p.D * c, c));
  }
  return b;
}

MetricsReport verify_schedule(const Topology& t, const traffic::DemandMatrix& dm, const sched::Schedule& s,
                              const sched::SchedParams& p, double tol) {
  MetricsReport r;
  r.violations = Checker(t, dm, s, p, tol).run();
  r.feasible = r.violations.empty();
  r.per_device_energy = device_energy(t, s, p);
  r.energy_joules = energy(t, s, p);
  r.completion_s = completion_time(t, s, p, tol);
  r.bounds = lower_bounds(t, dm, p);
  return r;
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json devices = nlohmann::json::object();
  for (const auto& [i, j] : r.per_device_energy) devices[std::to_string(i)] = j;
  nlohmann::json violations = nlohmann::json::array();
  for (const Violation& v : r.violations) {
    violations.push_back({{"tag", v.tag}, {"location", v.location}, {"magnitude", v.magnitude}});
  }
  return {{"energy_joules", r.energy_joules},
          {"energy_kwh", r.energy_kwh()},
          {"completion_s", r.completion_s},
          {"feasible", r.feasible},
          {"per_device_energy", devices},
          {"violations", violations},
          {"bounds", {{"M_lb", r.bounds.M_lb}, {"E_lb", r.bounds.E_lb}}}};
}

}  // namespace shuffleopt::metrics
