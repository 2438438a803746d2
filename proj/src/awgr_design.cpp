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

#include "shuffleopt/awgr_design.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace shuffleopt::awgr {
namespace {

using milp::LinearConstraint;
using milp::Model;
using milp::Sense;
using milp::Term;
using milp::VarId;
using milp::VarKind;

constexpr double kLinkGbps = 10.0;
constexpr double kPonSlotSeconds = 0.25;

// Row family tags, in model order.
const std::vector<std::string> kFamilies = {
    "flow_conservation",   "pair_single_wavelength", "destination_wavelength",
    "source_wavelength",   "no_relay",               "awgr_direction",
    "awgr_internal_use",   "arc_enable",             "group_transmit_port",
    "group_receive_port",  "olt_transmit_port",      "olt_receive_port",
    "input_port_unique",   "output_port_unique",     "awgr_internal",
    "trunk_limit",         "mutual_adjacency",
};

// Arcs, pairs and variable handles of one instance's model.
struct Layout {
  AwgrInstance inst;
  std::vector<Pair> arcs;  // arcs that may carry flow
  std::map<Pair, int> arc_index;
  std::vector<std::vector<int>> out_arcs, in_arcs;
  std::vector<Pair> pairs;  // (s, d), s != d
  std::map<Pair, int> pair_index;

  std::map<Pair, VarId> beta;
  std::vector<std::vector<VarId>> mu;  // [pair][j]
  std::vector<VarId> chi;              // [(pair * arcs + arc) * W + j]

  VarId chi_at(int pair, int arc, int j) const {
    return chi[(static_cast<std::size_t>(pair) * arcs.size() + arc) * inst.wavelengths() + j];
  }
};

std::string label(int j) { return "l" + std::to_string(j + 1); }

Layout make_layout(const AwgrInstance& inst) {
  Layout L;
  L.inst = inst;
  const int G = inst.G, K = inst.K, M = inst.M;
  auto add_arc = [&L](int m, int n) {
    L.arc_index.emplace(Pair(m, n), static_cast<int>(L.arcs.size()));
    L.arcs.emplace_back(m, n);
  };
  for (int s = 0; s < G; ++s) {
    for (int k = 0; k < K; ++k) {
      for (int p = 0; p < M; ++p) add_arc(s, inst.input(k, p));
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < M; ++p) {
      for (int d = 0; d < G; ++d) add_arc(inst.output(k, p), d);
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < M; ++p) {
      for (int q = 0; q < K; ++q) {
        for (int r = 0; r < M; ++r) add_arc(inst.output(k, p), inst.input(q, r));
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < M; ++p) {
      for (int r = 0; r < M; ++r) add_arc(inst.input(k, p), inst.output(k, r));
    }
  }
  L.out_arcs.assign(inst.num_nodes(), {});
  L.in_arcs.assign(inst.num_nodes(), {});
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    L.out_arcs[L.arcs[a].first].push_back(static_cast<int>(a));
    L.in_arcs[L.arcs[a].second].push_back(static_cast<int>(a));
  }
  for (int s = 0; s < G; ++s) {
    for (int d = 0; d < G; ++d) {
      if (s == d) continue;
      L.pair_index.emplace(Pair(s, d), static_cast<int>(L.pairs.size()));
      L.pairs.emplace_back(s, d);
    }
  }
  return L;
}

struct Built {
  Layout layout;
  Model model;
};

Built build(const AwgrInstance& inst) {
  Built b{make_layout(inst), Model{}};
  Layout& L = b.layout;
  Model& m = b.model;
  const int G = inst.G, K = inst.K, M = inst.M, W = inst.wavelengths();
  auto name = [&inst](int n) { return inst.name(n); };
  auto binary = [&m](std::string n) { return m.add_variable({std::move(n), VarKind::binary, 0.0, 1.0}); };

  std::set<Pair> beta_pairs;
  for (const Pair& a : L.arcs) {
    beta_pairs.insert(a);
    beta_pairs.emplace(a.second, a.first);
  }
  for (const Pair& p : beta_pairs) L.beta.emplace(p, binary("beta_" + name(p.first) + "_" + name(p.second)));
  for (const Pair& p : L.pairs) {
    std::vector<VarId> row;
    for (int j = 0; j < W; ++j) {
      row.push_back(binary("mu_" + name(p.first) + "_" + name(p.second) + "_" + label(j)));
    }
    L.mu.push_back(std::move(row));
  }
  for (const Pair& p : L.pairs) {
    for (const Pair& a : L.arcs) {
      for (int j = 0; j < W; ++j) {
        L.chi.push_back(binary("chi_" + name(p.first) + "_" + name(p.second) + "_" + name(a.first) + "_" +
                               name(a.second) + "_" + label(j)));
      }
    }
  }

  int serial = 0;
  auto row = [&m, &serial](const std::string& family, std::vector<Term> terms, Sense sense, double rhs) {
    m.add_constraint(LinearConstraint{family + "_" + std::to_string(serial++), std::move(terms), sense, rhs},
                     family);
  };
  const int npairs = static_cast<int>(L.pairs.size());

  for (int pi = 0; pi < npairs; ++pi) {
    const auto [s, d] = L.pairs[pi];
    for (int n = 0; n < inst.num_nodes(); ++n) {
      for (int j = 0; j < W; ++j) {
        std::vector<Term> t;
        for (int a : L.out_arcs[n]) t.push_back({L.chi_at(pi, a, j), 1.0});
        for (int a : L.in_arcs[n]) t.push_back({L.chi_at(pi, a, j), -1.0});
        if (n == s) t.push_back({L.mu[pi][j], -1.0});
        if (n == d) t.push_back({L.mu[pi][j], 1.0});
        row("flow_conservation", std::move(t), Sense::eq, 0.0);
      }
    }
  }
  for (int pi = 0; pi < npairs; ++pi) {
    std::vector<Term> t;
    for (int j = 0; j < W; ++j) t.push_back({L.mu[pi][j], 1.0});
    row("pair_single_wavelength", std::move(t), Sense::le, 1.0);
  }
  for (int d = 0; d < G; ++d) {
    for (int j = 0; j < W; ++j) {
      std::vector<Term> t;
      for (int s = 0; s < G; ++s) {
        if (s != d) t.push_back({L.mu[L.pair_index.at({s, d})][j], 1.0});
      }
      row("destination_wavelength", std::move(t), Sense::le, 1.0);
    }
  }
  for (int s = 0; s < G; ++s) {
    for (int j = 0; j < W; ++j) {
      std::vector<Term> t;
      for (int d = 0; d < G; ++d) {
        if (s != d) t.push_back({L.mu[L.pair_index.at({s, d})][j], 1.0});
      }
      row("source_wavelength", std::move(t), Sense::le, 1.0);
    }
  }
  for (int i = 0; i < G; ++i) {
    std::vector<Term> t;
    for (int pi = 0; pi < npairs; ++pi) {
      for (int a : L.out_arcs[i]) {
        for (int j = 0; j < W; ++j) t.push_back({L.chi_at(pi, a, j), 1.0});
      }
    }
    for (int d = 0; d < G; ++d) {
      if (d == i) continue;
      for (int j = 0; j < W; ++j) t.push_back({L.mu[L.pair_index.at({i, d})][j], -1.0});
    }
    row("no_relay", std::move(t), Sense::le, 0.0);
  }
  for (int pi = 0; pi < npairs; ++pi) {
    for (int k = 0; k < K; ++k) {
      for (int p = 0; p < M; ++p) {
        for (int j = 0; j < W; ++j) {
          std::vector<Term> t;
          for (int r = 0; r < M; ++r) {
            t.push_back({L.chi_at(pi, L.arc_index.at({inst.output(k, p), inst.input(k, r)}), j), 1.0});
          }
          row("awgr_direction", std::move(t), Sense::le, 0.0);
        }
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int r = 0; r < M; ++r) {
      for (int p = 0; p < M; ++p) {
        const int a = L.arc_index.at({inst.input(k, p), inst.output(k, r)});
        std::vector<Term> t;
        for (int pi = 0; pi < npairs; ++pi) {
          for (int j = 0; j < W; ++j) t.push_back({L.chi_at(pi, a, j), 1.0});
        }
        row("awgr_internal_use", std::move(t), Sense::le, 1.0);
      }
    }
  }
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    for (int j = 0; j < W; ++j) {
      std::vector<Term> t;
      for (int pi = 0; pi < npairs; ++pi) t.push_back({L.chi_at(pi, static_cast<int>(a), j), 1.0});
      t.push_back({L.beta.at(L.arcs[a]), -1.0});
      row("arc_enable", std::move(t), Sense::le, 0.0);
    }
  }
  auto port_sum = [&](int m0, bool inputs, std::vector<int> awgrs) {
    std::vector<Term> t;
    for (int k : awgrs) {
      for (int p = 0; p < M; ++p) {
        t.push_back({L.beta.at({m0, inputs ? inst.input(k, p) : inst.output(k, p)}), 1.0});
      }
    }
    return t;
  };
  std::vector<int> all_awgrs(K);
  for (int k = 0; k < K; ++k) all_awgrs[k] = k;
  for (int g = 1; g < G; ++g) row("group_transmit_port", port_sum(g, true, all_awgrs), Sense::le, 1.0);
  for (int g = 1; g < G; ++g) row("group_receive_port", port_sum(g, false, all_awgrs), Sense::le, 1.0);
  for (int k = 0; k < K; ++k) row("olt_transmit_port", port_sum(0, true, {k}), Sense::le, 1.0);
  for (int k = 0; k < K; ++k) row("olt_receive_port", port_sum(0, false, {k}), Sense::le, 1.0);
  for (int k = 0; k < K; ++k) {
    for (int q = 0; q < K; ++q) {
      if (q == k) continue;
      for (int p = 0; p < M; ++p) {
        std::vector<Term> t;
        const int n = inst.input(k, p);
        for (int v = 0; v < G; ++v) t.push_back({L.beta.at({v, n}), 1.0});
        for (int r = 0; r < M; ++r) t.push_back({L.beta.at({inst.output(q, r), n}), 1.0});
        row("input_port_unique", std::move(t), Sense::le, 1.0);
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int q = 0; q < K; ++q) {
      if (q == k) continue;
      for (int p = 0; p < M; ++p) {
        std::vector<Term> t;
        const int n = inst.output(k, p);
        for (int v = 0; v < G; ++v) t.push_back({L.beta.at({v, n}), 1.0});
        for (int r = 0; r < M; ++r) t.push_back({L.beta.at({inst.input(q, r), n}), 1.0});
        row("output_port_unique", std::move(t), Sense::le, 1.0);
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < M; ++p) {
      for (int r = 0; r < M; ++r) {
        row("awgr_internal", {{L.beta.at({inst.input(k, p), inst.output(k, r)}), 1.0}}, Sense::eq, 1.0);
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int q = 0; q < K; ++q) {
      if (q == k) continue;
      std::vector<Term> t;
      for (int p = 0; p < M; ++p) {
        for (int r = 0; r < M; ++r) t.push_back({L.beta.at({inst.output(k, p), inst.input(q, r)}), 1.0});
      }
      row("trunk_limit", std::move(t), Sense::le, static_cast<double>(inst.trunk_limit()));
    }
  }
  for (const auto& [p, id] : L.beta) {
    if (p.first < p.second) {
      row("mutual_adjacency", {{id, 1.0}, {L.beta.at({p.second, p.first}), -1.0}}, Sense::eq, 0.0);
    }
  }

  std::vector<Term> objective;
  for (const auto& r : L.mu) {
    for (VarId v : r) objective.push_back({v, 1.0});
  }
  m.set_objective(milp::Direction::maximize, objective, "connections");
  return b;
}

bool is_external_arc(const AwgrInstance& inst, int m, int n) {
  if (inst.is_comm(m)) return inst.is_input(n);
  if (inst.is_output(m) && inst.is_comm(n)) return true;
  return inst.is_output(m) && inst.is_input(n) && inst.awgr_of(m) != inst.awgr_of(n);
}

bool is_internal_arc(const AwgrInstance& inst, int m, int n) {
  return inst.is_input(m) && inst.is_output(n) && inst.awgr_of(m) == inst.awgr_of(n);
}

// Wiring assembled from port choices and AWGR tables by tracing each pair's
// light from the source's transmit ports.
struct FixtureSpec {
  int G = 0;
  std::vector<std::vector<std::pair<int, int>>> tx, rx;  // per vertex: (awgr, port)
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> trunks;
  std::vector<std::vector<int>> mu;                     // [s][d], one based, 0 on the diagonal
  std::vector<std::vector<std::vector<int>>> tables;    // [k][in][out], one based
};

AwgrWiring make_fixture(const FixtureSpec& f) {
  AwgrWiring w;
  w.inst = AwgrInstance::for_groups(f.G);
  const AwgrInstance& inst = w.inst;
  std::map<int, int> rx_owner, trunk_to;
  for (int v = 0; v < f.G; ++v) {
    for (auto [k, p] : f.tx[v]) w.beta.emplace(v, inst.input(k, p));
    for (auto [k, p] : f.rx[v]) {
      w.beta.emplace(inst.output(k, p), v);
      rx_owner[inst.output(k, p)] = v;
    }
  }
  for (const auto& [o, i] : f.trunks) {
    const int from = inst.output(o.first, o.second), to = inst.input(i.first, i.second);
    w.beta.emplace(from, to);
    trunk_to[from] = to;
  }
  for (int s = 0; s < f.G; ++s) {
    for (int d = 0; d < f.G; ++d) {
      if (s == d) continue;
      const int j = f.mu[s][d] - 1;
      std::vector<Hop> found;
      for (auto [k0, p0] : f.tx[s]) {
        std::vector<Hop> path = {{s, inst.input(k0, p0), j}};
        int k = k0, p = p0;
        for (int guard = 0; guard < inst.K; ++guard) {
          int out = -1;
          for (int r = 0; r < inst.M; ++r) {
            if (f.tables[k][p][r] - 1 == j) out = inst.output(k, r);
          }
          path.push_back({inst.input(k, p), out, j});
          if (rx_owner.count(out) && rx_owner[out] == d) {
            path.push_back({out, d, j});
            found = path;
            break;
          }
          if (!trunk_to.count(out)) break;
          const int next = trunk_to[out];
          path.push_back({out, next, j});
          k = inst.awgr_of(next);
          p = inst.port_index(next);
        }
        if (!found.empty()) break;
      }
      if (found.empty()) throw std::logic_error("fixture pair does not route: " + inst.name(s) + "->" + inst.name(d));
      w.mu[{s, d}] = j;
      w.paths[{s, d}] = std::move(found);
    }
  }
  return w;
}

int parse_name(const AwgrInstance& inst, const std::string& s) {
  if (s == "T") return 0;
  try {
    if (s.size() >= 2 && s[0] == 'g') {
      const int g = std::stoi(s.substr(1));
      if (g >= 1 && g < inst.G) return g;
    } else if (s.size() >= 4 && (s[0] == 'I' || s[0] == 'O')) {
      const auto u = s.find('_');
      const int k = std::stoi(s.substr(1, u - 1)) - 1;
      const int p = std::stoi(s.substr(u + 1)) - 1;
      if (k >= 0 && k < inst.K && p >= 0 && p < inst.M) {
        return s[0] == 'I' ? inst.input(k, p) : inst.output(k, p);
      }
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("unknown wiring node '" + s + "'");
}

topo::Check check(std::string name, bool passed, std::string expected, std::string actual) {
  return {std::move(name), passed, std::move(expected), std::move(actual)};
}

topo::Check count_check(std::string name, long bad) {
  return check(std::move(name), bad == 0, "0", std::to_string(bad));
}

}  // namespace

AwgrInstance AwgrInstance::for_groups(int G) {
  if (G < 3) throw ConfigError("an AWGR cell needs at least 3 communicating vertices");
  return AwgrInstance{G, 2, G - 1};
}

bool AwgrInstance::is_input(int n) const {
  return n >= G && n < num_nodes() && (n - G) % (2 * M) < M;
}

bool AwgrInstance::is_output(int n) const {
  return n >= G && n < num_nodes() && (n - G) % (2 * M) >= M;
}

std::string AwgrInstance::name(int n) const {
  if (n == 0) return "T";
  if (is_comm(n)) return "g" + std::to_string(n);
  const std::string suffix = std::to_string(awgr_of(n) + 1) + "_" + std::to_string(port_index(n) + 1);
  return (is_input(n) ? "I" : "O") + suffix;
}

int hop_count(const AwgrInstance& inst, const std::vector<Hop>& path) {
  return static_cast<int>(std::count_if(path.begin(), path.end(), [&inst](const Hop& h) {
    return is_internal_arc(inst, h.from, h.to);
  }));
}

milp::Model build_awgr_model(const AwgrInstance& inst) { return build(inst).model; }

const std::vector<std::string>& awgr_families() { return kFamilies; }

AwgrWiring decode_wiring(const milp::Assignment& a, const AwgrInstance& inst) {
  const Built b = build(inst);
  const Layout& L = b.layout;
  if (a.values.size() != b.model.num_variables()) {
    throw DecodeError("assignment has " + std::to_string(a.values.size()) + " values, model has " +
                      std::to_string(b.model.num_variables()));
  }
  std::vector<int> bit(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double v = a.values[i];
    const double r = std::round(v);
    if (std::abs(v - r) > milp::kFeasibilityTol || (r != 0.0 && r != 1.0)) {
      throw DecodeError("variable " + b.model.variables()[i].name + " is not binary: " + std::to_string(v));
    }
    bit[i] = static_cast<int>(r);
  }
  auto on = [&bit](VarId v) { return bit[v.index] == 1; };

  AwgrWiring w;
  w.inst = inst;
  for (const auto& [p, id] : L.beta) {
    if (on(id) && is_external_arc(inst, p.first, p.second)) w.beta.insert(p);
  }
  const int W = inst.wavelengths();
  for (std::size_t pi = 0; pi < L.pairs.size(); ++pi) {
    const auto [s, d] = L.pairs[pi];
    int chosen = -1;
    for (int j = 0; j < W; ++j) {
      if (!on(L.mu[pi][j])) continue;
      if (chosen >= 0) throw DecodeError("pair " + inst.name(s) + "->" + inst.name(d) + " has two wavelengths");
      chosen = j;
    }
    if (chosen < 0) continue;
    // Depth-first search over the arcs this pair uses on its wavelength.
    std::vector<bool> seen(inst.num_nodes(), false);
    std::vector<Hop> path;
    std::function<bool(int)> walk = [&](int n) {
      if (n == d) return true;
      seen[n] = true;
      for (int arc : L.out_arcs[n]) {
        const int next = L.arcs[arc].second;
        if (seen[next] || !on(L.chi_at(static_cast<int>(pi), arc, chosen))) continue;
        path.push_back({n, next, chosen});
        if (walk(next)) return true;
        path.pop_back();
      }
      return false;
    };
    if (!walk(s)) throw DecodeError("no path for " + inst.name(s) + "->" + inst.name(d));
    w.mu[{s, d}] = chosen;
    w.paths[{s, d}] = std::move(path);
  }
  return w;
}

milp::Assignment wiring_assignment(const AwgrWiring& w) {
  const Built b = build(w.inst);
  const Layout& L = b.layout;
  const AwgrInstance& inst = w.inst;
  milp::Assignment a;
  a.status = milp::SolveStatus::optimal;
  a.values.assign(b.model.num_variables(), 0.0);
  auto set = [&a](VarId v) { a.values[v.index] = 1.0; };
  for (int k = 0; k < inst.K; ++k) {
    for (int p = 0; p < inst.M; ++p) {
      for (int r = 0; r < inst.M; ++r) {
        set(L.beta.at({inst.input(k, p), inst.output(k, r)}));
        set(L.beta.at({inst.output(k, r), inst.input(k, p)}));
      }
    }
  }
  for (const Pair& p : w.beta) {
    auto fwd = L.beta.find(p);
    if (fwd == L.beta.end()) throw ConfigError("wiring uses an arc outside the model");
    set(fwd->second);
    set(L.beta.at({p.second, p.first}));
  }
  for (const auto& [pair, j] : w.mu) {
    const int pi = L.pair_index.at(pair);
    set(L.mu[pi][j]);
    for (const Hop& h : w.paths.at(pair)) {
      auto arc = L.arc_index.find({h.from, h.to});
      if (arc == L.arc_index.end()) throw ConfigError("wiring path uses an arc outside the model");
      set(L.chi_at(pi, arc->second, h.wavelength));
    }
  }
  a.objective_value = b.model.objective_value(a.values);
  return a;
}

bool WiringReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const topo::Check& c) { return c.passed; });
}

const topo::Check* WiringReport::find(std::string_view name) const {
  for (const topo::Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

WiringReport verify_wiring(const AwgrWiring& w) {
  const AwgrInstance& inst = w.inst;
  const int W = inst.wavelengths();
  WiringReport r;

  long bad_pairs = 0;
  for (const auto& [pair, j] : w.mu) {
    const auto [s, d] = pair;
    if (s == d || !inst.is_comm(s) || !inst.is_comm(d) || j < 0 || j >= W || !w.paths.count(pair)) ++bad_pairs;
  }
  for (const auto& [pair, path] : w.paths) {
    if (!w.mu.count(pair)) ++bad_pairs;
  }
  r.checks.push_back(count_check("single_wavelength", bad_pairs));

  std::map<Pair, int> by_destination, by_source;  // (vertex, wavelength) -> users
  for (const auto& [pair, j] : w.mu) {
    ++by_destination[{pair.second, j}];
    ++by_source[{pair.first, j}];
  }
  auto clashes = [](const std::map<Pair, int>& m) {
    long n = 0;
    for (const auto& [key, c] : m) n += c > 1 ? c - 1 : 0;
    return n;
  };
  r.checks.push_back(count_check("destination_wavelength", clashes(by_destination)));
  r.checks.push_back(count_check("source_wavelength", clashes(by_source)));

  long broken = 0, relayed = 0;
  for (const auto& [pair, path] : w.paths) {
    const auto it = w.mu.find(pair);
    const int j = it == w.mu.end() ? -1 : it->second;
    bool ok = !path.empty() && path.front().from == pair.first && path.back().to == pair.second;
    for (std::size_t h = 0; h < path.size(); ++h) {
      const Hop& hop = path[h];
      ok = ok && hop.wavelength == j;
      ok = ok && (w.beta.count({hop.from, hop.to}) || is_internal_arc(inst, hop.from, hop.to));
      if (h > 0) ok = ok && path[h - 1].to == hop.from;
      if (h > 0 && inst.is_comm(hop.from)) ++relayed;
    }
    if (!ok) ++broken;
  }
  r.checks.push_back(count_check("continuity", broken));
  r.checks.push_back(count_check("no_relay", relayed));

  // One wavelength per (input, output); one output per (input, wavelength);
  // no two pairs on the same arc and wavelength.
  std::map<Pair, std::set<int>> waves_on_internal;
  std::map<Pair, std::set<int>> outputs_of_input_wave;
  std::map<std::tuple<int, int, int>, int> arc_users;
  for (const auto& [pair, path] : w.paths) {
    for (const Hop& h : path) {
      ++arc_users[{h.from, h.to, h.wavelength}];
      if (is_internal_arc(inst, h.from, h.to)) {
        waves_on_internal[{h.from, h.to}].insert(h.wavelength);
        outputs_of_input_wave[{h.from, h.wavelength}].insert(h.to);
      }
    }
  }
  long routing = 0;
  for (const auto& [arc, waves] : waves_on_internal) routing += static_cast<long>(waves.size()) - 1;
  for (const auto& [key, outs] : outputs_of_input_wave) routing += static_cast<long>(outs.size()) - 1;
  for (const auto& [key, users] : arc_users) routing += users - 1;
  r.checks.push_back(count_check("awgr_routing", routing));

  long port_errors = 0;
  std::map<int, int> into_input, out_of_output;
  std::map<std::pair<int, int>, int> tx_per_awgr, rx_per_awgr;  // (vertex, awgr) -> fibres
  std::map<Pair, int> trunks;                                    // (from awgr, to awgr) -> count
  for (const auto& [m, n] : w.beta) {
    if (!is_external_arc(inst, m, n)) {
      ++port_errors;
      continue;
    }
    if (inst.is_input(n)) ++into_input[n];
    if (inst.is_output(m)) ++out_of_output[m];
    if (inst.is_comm(m)) ++tx_per_awgr[{m, inst.awgr_of(n)}];
    if (inst.is_comm(n)) ++rx_per_awgr[{n, inst.awgr_of(m)}];
    if (inst.is_output(m) && inst.is_input(n)) ++trunks[{inst.awgr_of(m), inst.awgr_of(n)}];
  }
  for (const auto& [port, c] : into_input) port_errors += c > 1 ? c - 1 : 0;
  for (const auto& [port, c] : out_of_output) port_errors += c > 1 ? c - 1 : 0;
  for (const auto* per : {&tx_per_awgr, &rx_per_awgr}) {
    std::map<int, int> total;
    for (const auto& [key, c] : *per) {
      port_errors += c > 1 ? c - 1 : 0;
      total[key.first] += c;
    }
    for (const auto& [v, c] : total) {
      if (v != 0 && c > 1) port_errors += c - 1;
    }
  }
  for (const auto& [key, c] : trunks) port_errors += std::max(0, c - inst.trunk_limit());
  r.checks.push_back(count_check("ports", port_errors));

  r.connections = static_cast<int>(w.mu.size());
  const int full = inst.G * (inst.G - 1);
  r.checks.push_back(check("connections", r.connections == full, std::to_string(full),
                           std::to_string(r.connections)));
  for (const auto& [pair, path] : w.paths) r.hops[pair] = hop_count(inst, path);
  return r;
}

AwgrWiring table_wiring() {
  FixtureSpec f;
  f.G = 5;
  // Transmit and receive fibres as (AWGR, port), zero based.
  f.tx = {{{0, 2}, {1, 2}}, {{0, 1}}, {{1, 3}}, {{1, 0}}, {{0, 0}}};
  f.rx = {{{0, 0}, {1, 2}}, {{1, 3}}, {{0, 3}}, {{0, 1}}, {{1, 0}}};
  f.trunks = {{{0, 2}, {1, 1}}, {{1, 1}, {0, 3}}};
  f.mu = {{0, 3, 2, 1, 4},
          {2, 0, 3, 4, 1},
          {1, 4, 0, 2, 3},
          {3, 1, 4, 0, 2},
          {4, 2, 1, 3, 0}};
  f.tables = {{{4, 3, 2, 1}, {2, 4, 1, 3}, {3, 1, 4, 2}, {1, 2, 3, 4}},
              {{2, 4, 3, 1}, {1, 3, 4, 2}, {4, 1, 2, 3}, {3, 2, 1, 4}}};
  return make_fixture(f);
}

AwgrWiring three_group_wiring() {
  FixtureSpec f;
  f.G = 3;
  f.tx = {{{0, 0}, {1, 0}}, {{0, 1}}, {{1, 1}}};
  f.rx = {{{0, 0}, {1, 0}}, {{1, 1}}, {{0, 1}}};
  f.mu = {{0, 1, 2}, {2, 0, 1}, {1, 2, 0}};
  f.tables = {{{1, 2}, {2, 1}}, {{2, 1}, {1, 2}}};
  return make_fixture(f);
}

std::vector<std::vector<std::vector<int>>> routing_tables(const AwgrWiring& w) {
  const AwgrInstance& inst = w.inst;
  const int M = inst.M;
  std::vector<std::vector<std::vector<int>>> tables(inst.K, std::vector<std::vector<int>>(M, std::vector<int>(M, -1)));
  for (const auto& [pair, path] : w.paths) {
    for (const Hop& h : path) {
      if (!is_internal_arc(inst, h.from, h.to)) continue;
      int& cell = tables[inst.awgr_of(h.from)][inst.port_index(h.from)][inst.port_index(h.to)];
      if (cell >= 0 && cell != h.wavelength) throw ConfigError("AWGR arc " + inst.name(h.from) + "->" + inst.name(h.to) + " carries two wavelengths");
      cell = h.wavelength;
    }
  }
  for (auto& t : tables) {
    for (int p = 0; p < M; ++p) {
      for (int r = 0; r < M; ++r) {
        if (t[p][r] < 0) continue;
        for (int x = 0; x < M; ++x) {
          if ((x != r && t[p][x] == t[p][r]) || (x != p && t[x][r] == t[p][r])) {
            throw ConfigError("AWGR wavelength table repeats a wavelength in a row or column");
          }
        }
      }
    }
    std::function<bool(int)> fill = [&](int cell) {
      if (cell == M * M) return true;
      const int p = cell / M, r = cell % M;
      if (t[p][r] >= 0) return fill(cell + 1);
      for (int j = 0; j < M; ++j) {
        bool free = true;
        for (int x = 0; x < M && free; ++x) free = t[p][x] != j && t[x][r] != j;
        if (!free) continue;
        t[p][r] = j;
        if (fill(cell + 1)) return true;
        t[p][r] = -1;
      }
      return false;
    };
    if (!fill(0)) throw ConfigError("AWGR wavelength table has no Latin completion");
  }
  return tables;
}

topo::Topology wiring_to_topology(const AwgrWiring& w, int servers_per_rack, topo::Profile profile) {
  using topo::Link;
  using topo::Vertex;
  using topo::VertexKind;
  const WiringReport report = verify_wiring(w);
  for (const topo::Check& c : report.checks) {
    if (!c.passed) throw ConfigError("wiring fails check '" + c.name + "' (" + c.actual + ")");
  }
  if (servers_per_rack < 1) throw ConfigError("servers_per_rack must be positive");
  const AwgrInstance& inst = w.inst;
  const int W = inst.wavelengths();
  const int ports = 2 * inst.K * inst.M;

  std::vector<Vertex> vertices;
  for (int n = inst.G; n < inst.num_nodes(); ++n) {
    vertices.push_back({n - inst.G + 1, inst.is_input(n) ? VertexKind::awgr_in_port : VertexKind::awgr_out_port,
                        "", inst.awgr_of(n)});
  }
  const int olt = ports + 1;
  vertices.push_back({olt, VertexKind::olt_port, "olt_card", -1});
  std::vector<int> backplane(inst.G, -1);
  for (int g = 1; g < inst.G; ++g) {
    backplane[g] = ports + 1 + g;
    vertices.push_back({backplane[g], VertexKind::backplane, "polymer_backplane", g - 1});
  }
  std::vector<std::vector<int>> rack(inst.G);
  std::vector<int> servers;
  int next = ports + inst.G + 1;
  for (int g = 1; g < inst.G; ++g) {
    for (int s = 0; s < servers_per_rack; ++s) {
      rack[g].push_back(next);
      servers.push_back(next);
      vertices.push_back({next++, VertexKind::server, "tunable_transceiver", g - 1});
    }
  }

  auto id_of = [&inst](int n) { return n - inst.G + 1; };
  std::vector<Link> links;
  auto fibre = [&links, W](int u, int v) {
    for (int j = 0; j < W; ++j) links.push_back({u, v, j, kLinkGbps, true});
  };
  for (const auto& [m, n] : w.beta) {
    if (inst.is_comm(m)) {
      if (m == 0) {
        fibre(olt, id_of(n));
      } else {
        for (int s : rack[m]) fibre(s, id_of(n));
      }
    } else if (inst.is_comm(n)) {
      if (n == 0) {
        fibre(id_of(m), olt);
      } else {
        for (int s : rack[n]) fibre(id_of(m), s);
      }
    } else {
      fibre(id_of(m), id_of(n));
    }
  }
  const auto tables = routing_tables(w);
  for (int k = 0; k < inst.K; ++k) {
    for (int p = 0; p < inst.M; ++p) {
      for (int r = 0; r < inst.M; ++r) {
        links.push_back({id_of(inst.input(k, p)), id_of(inst.output(k, r)), tables[k][p][r], kLinkGbps, true});
      }
    }
  }
  for (int g = 1; g < inst.G; ++g) {
    for (int s : rack[g]) {
      links.push_back({s, backplane[g], 0, kLinkGbps, true});
      links.push_back({backplane[g], s, 0, kLinkGbps, true});
    }
  }
  return topo::Topology(topo::Kind::pon3, profile, std::move(vertices), std::move(links), W, servers,
                        kPonSlotSeconds);
}

nlohmann::json to_json(const AwgrWiring& w) {
  const AwgrInstance& inst = w.inst;
  nlohmann::json j = {{"G", inst.G}, {"K", inst.K}, {"M", inst.M}};
  auto& beta = j["beta"] = nlohmann::json::array();
  for (const auto& [m, n] : w.beta) beta.push_back({inst.name(m), inst.name(n)});
  auto& mu = j["mu"] = nlohmann::json::array();
  for (const auto& [pair, wave] : w.mu) {
    mu.push_back({{"s", inst.name(pair.first)}, {"d", inst.name(pair.second)}, {"wavelength", wave}});
  }
  auto& paths = j["paths"] = nlohmann::json::array();
  for (const auto& [pair, path] : w.paths) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Hop& h : path) {
      edges.push_back({{"from", inst.name(h.from)}, {"to", inst.name(h.to)}, {"wavelength", h.wavelength}});
    }
    paths.push_back({{"s", inst.name(pair.first)},
                     {"d", inst.name(pair.second)},
                     {"hops", hop_count(inst, path)},
                     {"edges", std::move(edges)}});
  }
  return j;
}

AwgrWiring wiring_from_json(const nlohmann::json& j) {
  try {
    AwgrWiring w;
    w.inst = AwgrInstance::for_groups(j.at("G").get<int>());
    const AwgrInstance& inst = w.inst;
    if (j.value("K", 2) != inst.K || j.value("M", inst.M) != inst.M) {
      throw ConfigError("wiring document has unsupported K or M");
    }
    for (const auto& b : j.at("beta")) {
      w.beta.emplace(parse_name(inst, b.at(0).get<std::string>()), parse_name(inst, b.at(1).get<std::string>()));
    }
    for (const auto& m : j.at("mu")) {
      w.mu[{parse_name(inst, m.at("s").get<std::string>()), parse_name(inst, m.at("d").get<std::string>())}] =
          m.at("wavelength").get<int>();
    }
    for (const auto& p : j.at("paths")) {
      std::vector<Hop> path;
      for (const auto& e : p.at("edges")) {
        path.push_back({parse_name(inst, e.at("from").get<std::string>()),
                        parse_name(inst, e.at("to").get<std::string>()), e.at("wavelength").get<int>()});
      }
      w.paths[{parse_name(inst, p.at("s").get<std::string>()), parse_name(inst, p.at("d").get<std::string>())}] =
          std::move(path);
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed wiring document: ") + e.what());
  }
}

}  // namespace shuffleopt::awgr
