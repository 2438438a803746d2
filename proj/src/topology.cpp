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

#include "shuffleopt/topology.hpp"

#include <algorithm>
#include <set>

#include "shuffleopt/awgr_design.hpp"

namespace shuffleopt::topo {
namespace {

constexpr double kLinkGbps = 10.0;

const char* kSwitchSmall = "SG500XG-8F8T";
const char* kSwitchLarge = "Nexus-3524X";
const char* kTransceiver = "sfp_transceiver";
const char* kNic = "PE10G2T-SR";
const char* kOlt = "olt_card";
const char* kBackplane = "polymer_backplane";

// Accumulates vertices and links with sequential ids starting at 1.
class GraphBuilder {
 public:
  int add(VertexKind kind, std::string device, int group = -1) {
    const int id = static_cast<int>(vertices_.size()) + 1;
    vertices_.push_back({id, kind, std::move(device), group});
    return id;
  }
  void connect(int u, int v) { links_.push_back({u, v, 0, kLinkGbps, false}); }
  std::vector<Vertex> take_vertices() { return std::move(vertices_); }
  std::vector<Link> take_links() { return std::move(links_); }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Link> links_;
};

Topology finish(Kind kind, Profile profile, GraphBuilder& b, std::vector<int> eligible,
                double slot_seconds = 1.0) {
  return Topology(kind, profile, b.take_vertices(), b.take_links(), 1, std::move(eligible),
                  slot_seconds);
}

// k-ary fat-tree: k pods of k/2 edge and k/2 aggregation switches, (k/2)^2
// cores, k/2 servers per edge switch. The desk variant uses one edge and
// one aggregation switch per pod, two pods, one core.
Topology fat_tree(Profile profile) {
  const bool paper = profile == Profile::paper;
  const int pods = paper ? 4 : 2;
  const int half = paper ? 2 : 1;  // edge (and agg) switches per pod
  const int hosts = 2;  // servers per edge switch
  const int cores = half * half;
  GraphBuilder b;
  std::vector<int> servers;
  for (int p = 0; p < pods; ++p) {
    for (int e = 0; e < half; ++e) {
      for (int h = 0; h < hosts; ++h) servers.push_back(b.add(VertexKind::server, kTransceiver, p));
    }
  }
  std::vector<std::vector<int>> edge(pods), agg(pods);
  for (int p = 0; p < pods; ++p) {
    for (int e = 0; e < half; ++e) edge[p].push_back(b.add(VertexKind::switch_, kSwitchSmall, p));
    for (int a = 0; a < half; ++a) agg[p].push_back(b.add(VertexKind::switch_, kSwitchSmall, p));
  }
  std::vector<int> core;
  for (int c = 0; c < cores; ++c) core.push_back(b.add(VertexKind::switch_, kSwitchSmall));
  std::size_t next = 0;
  for (int p = 0; p < pods; ++p) {
    for (int e = 0; e < half; ++e) {
      for (int h = 0; h < hosts; ++h) b.connect(servers[next++], edge[p][e]);
      for (int a = 0; a < half; ++a) b.connect(edge[p][e], agg[p][a]);
    }
    for (int a = 0; a < half; ++a) {
      for (int c = 0; c < half; ++c) b.connect(agg[p][a], core[a * half + c]);
    }
  }
  return finish(Kind::fat_tree, profile, b, servers);
}

Topology spine_leaf(Profile profile) {
  const bool paper = profile == Profile::paper;
  const int leaves = paper ? 4 : 2;
  const int spines = paper ? 2 : 1;
  const int hosts = paper ? 4 : 2;
  GraphBuilder b;
  std::vector<int> servers;
  for (int l = 0; l < leaves; ++l) {
    for (int h = 0; h < hosts; ++h) servers.push_back(b.add(VertexKind::server, kTransceiver, l));
  }
  std::vector<int> leaf, spine;
  for (int l = 0; l < leaves; ++l) leaf.push_back(b.add(VertexKind::switch_, kSwitchLarge, l));
  for (int s = 0; s < spines; ++s) spine.push_back(b.add(VertexKind::switch_, kSwitchLarge));
  for (int l = 0; l < leaves; ++l) {
    for (int h = 0; h < hosts; ++h) b.connect(servers[l * hosts + h], leaf[l]);
    for (int s : spine) b.connect(leaf[l], s);
  }
  return finish(Kind::spine_leaf, profile, b, servers);
}

// BCube_1 with n-port switches: n^2 servers, n level-0 and n level-1
// switches. Level-0 switch j holds servers jn..jn+n-1; level-1 switch i
// holds server jn+i of every level-0 unit j.
Topology bcube(Profile profile) {
  const int n = profile == Profile::paper ? 4 : 2;
  GraphBuilder b;
  std::vector<int> servers;
  for (int s = 0; s < n * n; ++s) servers.push_back(b.add(VertexKind::server, kNic, s / n));
  std::vector<int> level0, level1;
  for (int j = 0; j < n; ++j) level0.push_back(b.add(VertexKind::switch_, kSwitchSmall, j));
  for (int i = 0; i < n; ++i) level1.push_back(b.add(VertexKind::switch_, kSwitchSmall));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) b.connect(servers[j * n + i], level0[j]);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b.connect(servers[j * n + i], level1[i]);
  }
  return finish(Kind::bcube, profile, b, servers);
}

// DCell_1: n+1 cells of n servers behind one switch each; cells i < j are
// joined by server (i, j-1) <-> server (j, i). The last cell relays only.
Topology dcell(Profile profile) {
  const int n = profile == Profile::paper ? 4 : 2;
  const int cells = n + 1;
  GraphBuilder b;
  std::vector<std::vector<int>> server(cells);
  std::vector<int> eligible;
  for (int c = 0; c < cells; ++c) {
    for (int s = 0; s < n; ++s) {
      server[c].push_back(b.add(VertexKind::server, kNic, c));
      if (c + 1 < cells) eligible.push_back(server[c].back());
    }
  }
  std::vector<int> sw;
  for (int c = 0; c < cells; ++c) sw.push_back(b.add(VertexKind::switch_, kSwitchSmall, c));
  for (int c = 0; c < cells; ++c) {
    for (int s : server[c]) b.connect(s, sw[c]);
  }
  for (int i = 0; i < cells; ++i) {
    for (int j = i + 1; j < cells; ++j) b.connect(server[i][j - 1], server[j][i]);
  }
  return finish(Kind::dcell, profile, b, eligible);
}

// Server-centric PON: each rack's servers share a backplane; the lowest id
// server of each rack is the gateway to the OLT; the second server of
// consecutive racks is cabled directly.
Topology pon5(Profile profile) {
  const bool paper = profile == Profile::paper;
  const int racks = paper ? 4 : 2;
  const int hosts = paper ? 4 : 2;
  GraphBuilder b;
  std::vector<std::vector<int>> server(racks);
  std::vector<int> all;
  for (int r = 0; r < racks; ++r) {
    for (int h = 0; h < hosts; ++h) {
      server[r].push_back(b.add(VertexKind::server, kNic, r));
      all.push_back(server[r].back());
    }
  }
  std::vector<int> backplane;
  for (int r = 0; r < racks; ++r) backplane.push_back(b.add(VertexKind::backplane, kBackplane, r));
  const int olt = b.add(VertexKind::olt_port, kOlt);
  for (int r = 0; r < racks; ++r) {
    for (int s : server[r]) b.connect(s, backplane[r]);
  }
  for (int r = 0; r < racks; ++r) b.connect(server[r][0], olt);
  for (int r = 0; r + 1 < racks; ++r) b.connect(server[r][1], server[r + 1][1]);
  return finish(Kind::pon5, profile, b, all);
}

Topology pon3(Profile profile) {
  if (profile == Profile::paper) {
    return awgr::wiring_to_topology(awgr::table_wiring(), 4, profile);
  }
  return awgr::wiring_to_topology(awgr::three_group_wiring(), 2, profile);
}

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<E> values, const char* what) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

VertexKind parse_vertex_kind(std::string_view s) {
  return parse_enum(s,
                    {VertexKind::server, VertexKind::switch_, VertexKind::olt_port,
                     VertexKind::awgr_in_port, VertexKind::awgr_out_port, VertexKind::backplane},
                    "vertex kind");
}

PowerLaw parse_power_law(std::string_view s) {
  return parse_enum(s, {PowerLaw::on_off, PowerLaw::nic_offload}, "power law");
}

Check make_check(std::string name, long expected, long actual) {
  return {std::move(name), expected == actual, std::to_string(expected), std::to_string(actual)};
}

}  // namespace

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::fat_tree: return "fat_tree";
    case Kind::spine_leaf: return "spine_leaf";
    case Kind::bcube: return "bcube";
    case Kind::dcell: return "dcell";
    case Kind::pon3: return "pon3";
    case Kind::pon5: return "pon5";
  }
  return "?";
}

std::string_view to_string(Profile p) { return p == Profile::paper ? "paper" : "desk"; }

std::string_view to_string(VertexKind k) {
  switch (k) {
    case VertexKind::server: return "server";
    case VertexKind::switch_: return "switch";
    case VertexKind::olt_port: return "olt_port";
    case VertexKind::awgr_in_port: return "awgr_in_port";
    case VertexKind::awgr_out_port: return "awgr_out_port";
    case VertexKind::backplane: return "backplane";
  }
  return "?";
}

std::string_view to_string(PowerLaw p) { return p == PowerLaw::on_off ? "on_off" : "nic_offload"; }

Kind parse_kind(std::string_view s) {
  return parse_enum(s, {Kind::fat_tree, Kind::spine_leaf, Kind::bcube, Kind::dcell, Kind::pon3, Kind::pon5},
                    "topology kind");
}

Profile parse_profile(std::string_view s) {
  return parse_enum(s, {Profile::paper, Profile::desk}, "profile");
}

const std::vector<Kind>& all_kinds() {
  static const std::vector<Kind> kinds = {Kind::fat_tree, Kind::spine_leaf, Kind::bcube,
                                          Kind::dcell,    Kind::pon3,       Kind::pon5};
  return kinds;
}

const std::map<std::string, DeviceSpec>& device_catalog() {
  static const std::map<std::string, DeviceSpec> catalog = [] {
    std::map<std::string, DeviceSpec> c;
    auto put = [&c](DeviceSpec d) { c.emplace(d.name, std::move(d)); };
    put({kSwitchSmall, 94.33, PowerLaw::on_off, 0.0, 320.0});
    put({kSwitchLarge, 193.0, PowerLaw::on_off, 0.0, 480.0});
    put({kTransceiver, 1.0, PowerLaw::on_off, 0.0, 0.0});
    put({"tunable_transceiver", 1.0, PowerLaw::on_off, 0.0, 0.0});
    put({kNic, 14.0, PowerLaw::nic_offload, 14.29, 0.0});
    put({kOlt, 217.0, PowerLaw::on_off, 0.0, 40.0});
    put({kBackplane, 12.0, PowerLaw::on_off, 0.0, 40.0});
    put({"awgr", 0.0, PowerLaw::on_off, 0.0, 0.0});
    put({"SFP-10GDWZR-TC", 2.0, PowerLaw::on_off, 0.0, 0.0});
    put({"fpga_nic", 12.3, PowerLaw::on_off, 0.0, 0.0});
    return c;
  }();
  return catalog;
}

Topology::Topology(Kind kind, Profile profile, std::vector<Vertex> vertices, std::vector<Link> links,
                   int wavelengths, std::vector<int> task_eligible, double slot_seconds,
                   std::map<std::string, DeviceSpec> devices)
    : kind_(kind),
      profile_(profile),
      vertices_(std::move(vertices)),
      links_(std::move(links)),
      wavelengths_(wavelengths),
      task_eligible_(std::move(task_eligible)),
      slot_seconds_(slot_seconds),
      devices_(std::move(devices)) {
  std::sort(task_eligible_.begin(), task_eligible_.end());
  index();
}

void Topology::index() {
  if (wavelengths_ < 1) throw ConfigError("a topology needs at least one wavelength");
  if (!(slot_seconds_ > 0.0)) throw ConfigError("slot_seconds must be positive");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!index_.emplace(vertices_[i].id, i).second) {
      throw ConfigError("duplicate vertex id " + std::to_string(vertices_[i].id));
    }
  }
  auto add_arc = [this](int u, int v, int w, double c) {
    if (!capacity_.emplace(std::tuple(u, v, w), c).second) {
      throw ConfigError("duplicate link " + std::to_string(u) + "->" + std::to_string(v) +
                        " on wavelength " + std::to_string(w));
    }
  };
  for (const Link& l : links_) {
    if (!has_vertex(l.u) || !has_vertex(l.v)) {
      throw ConfigError("link " + std::to_string(l.u) + "-" + std::to_string(l.v) +
                        " names an unknown vertex");
    }
    if (l.u == l.v) throw ConfigError("self loop at vertex " + std::to_string(l.u));
    if (l.wavelength < 0) throw ConfigError("negative wavelength on a link");
    add_arc(l.u, l.v, l.wavelength, l.capacity_gbps);
    if (!l.directed) add_arc(l.v, l.u, l.wavelength, l.capacity_gbps);
  }
  for (const auto& [key, c] : capacity_) {
    const auto [u, v, w] = key;
    arcs_.push_back({u, v, w, c});
    auto& out = neighbors_[u];
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  for (const Vertex& v : vertices_) neighbors_[v.id];
}

const Vertex& Topology::vertex(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ConfigError("unknown vertex id " + std::to_string(id));
  return vertices_[it->second];
}

const DeviceSpec& Topology::device_power(int id) const {
  const Vertex& v = vertex(id);
  if (v.device.empty()) throw ConfigError("vertex " + std::to_string(id) + " has no device");
  auto it = devices_.find(v.device);
  if (it == devices_.end()) {
    throw ConfigError("vertex " + std::to_string(id) + " references unknown device '" + v.device + "'");
  }
  return it->second;
}

const std::vector<int>& Topology::neighbors(int u) const {
  auto it = neighbors_.find(u);
  if (it == neighbors_.end()) throw ConfigError("unknown vertex id " + std::to_string(u));
  return it->second;
}

std::optional<double> Topology::capacity(int u, int v, int w) const {
  auto it = capacity_.find(std::tuple(u, v, w));
  if (it == capacity_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Topology::servers() const {
  std::vector<int> out;
  for (const Vertex& v : vertices_) {
    if (v.kind == VertexKind::server) out.push_back(v.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Topology::switches() const {
  std::vector<int> out;
  for (const Vertex& v : vertices_) {
    if (is_switch_like(v.id)) out.push_back(v.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Topology::is_switch_like(int id) const {
  const VertexKind k = vertex(id).kind;
  return k == VertexKind::switch_ || k == VertexKind::backplane || k == VertexKind::olt_port;
}

bool Topology::is_awgr_port(int id) const {
  const VertexKind k = vertex(id).kind;
  return k == VertexKind::awgr_in_port || k == VertexKind::awgr_out_port;
}

int Topology::count_servers() const { return static_cast<int>(servers().size()); }

int Topology::count_switches() const {
  std::set<int> awgrs;
  for (const Vertex& v : vertices_) {
    if (is_awgr_port(v.id)) awgrs.insert(v.group);
  }
  return static_cast<int>(switches().size() + awgrs.size());
}

int Topology::count_links() const {
  auto fabric = [this](int id) { return is_awgr_port(id) || vertex(id).kind == VertexKind::olt_port; };
  std::set<std::tuple<int, int, bool>> fibres;
  for (const Link& l : links_) {
    if (fabric(l.u) && fabric(l.v)) continue;
    if (l.directed) {
      fibres.emplace(l.u, l.v, true);
    } else {
      fibres.emplace(std::min(l.u, l.v), std::max(l.u, l.v), false);
    }
  }
  return static_cast<int>(fibres.size());
}

Topology build_topology(Kind kind, Profile profile) {
  Topology t;
  switch (kind) {
    case Kind::fat_tree: t = fat_tree(profile); break;
    case Kind::spine_leaf: t = spine_leaf(profile); break;
    case Kind::bcube: t = bcube(profile); break;
    case Kind::dcell: t = dcell(profile); break;
    case Kind::pon3: t = pon3(profile); break;
    case Kind::pon5: t = pon5(profile); break;
  }
  const ValidationReport report = validate_topology(t);
  for (const Check& c : report.checks) {
    if (!c.passed) {
      throw ConfigError(std::string(to_string(kind)) + ": check '" + c.name + "' expected " +
                        c.expected + ", got " + c.actual);
    }
  }
  return t;
}

ExpectedCounts expected_counts(Kind kind, Profile profile) {
  const bool paper = profile == Profile::paper;
  switch (kind) {
    case Kind::fat_tree: return paper ? ExpectedCounts{16, 20, 48, 1, 16} : ExpectedCounts{4, 5, 8, 1, 4};
    case Kind::spine_leaf: return paper ? ExpectedCounts{16, 6, 24, 1, 16} : ExpectedCounts{4, 3, 6, 1, 4};
    case Kind::bcube: return paper ? ExpectedCounts{16, 8, 32, 1, 16} : ExpectedCounts{4, 4, 8, 1, 4};
    case Kind::dcell: return paper ? ExpectedCounts{20, 5, 30, 1, 16} : ExpectedCounts{6, 3, 9, 1, 4};
    case Kind::pon3: return paper ? ExpectedCounts{16, 7, 64, 4, 16} : ExpectedCounts{4, 5, 16, 2, 4};
    case Kind::pon5: return paper ? ExpectedCounts{16, 5, 23, 1, 16} : ExpectedCounts{4, 3, 7, 1, 4};
  }
  return {};
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(std::string_view name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_topology(const Topology& t) {
  const ExpectedCounts want = expected_counts(t.kind(), t.profile());
  ValidationReport r;
  r.checks.push_back(make_check("servers", want.servers, t.count_servers()));
  r.checks.push_back(make_check("switches", want.switches, t.count_switches()));
  r.checks.push_back(make_check("links", want.links, t.count_links()));
  r.checks.push_back(make_check("wavelengths", want.wavelengths, t.wavelengths()));
  r.checks.push_back(make_check("task_eligible", want.task_eligible,
                                static_cast<long>(t.task_eligible().size())));

  long bad_capacity = 0, bad_wavelength = 0;
  for (const Arc& a : t.arcs()) {
    if (!(a.capacity > 0.0)) ++bad_capacity;
    if (a.w >= t.wavelengths()) ++bad_wavelength;
  }
  r.checks.push_back(make_check("capacity_positive", 0, bad_capacity));
  r.checks.push_back(make_check("link_wavelengths", 0, bad_wavelength));

  if (t.kind() != Kind::pon3) {
    long asymmetric = 0;
    for (const Vertex& u : t.vertices()) {
      for (int v : t.neighbors(u.id)) {
        const auto& back = t.neighbors(v);
        if (!std::binary_search(back.begin(), back.end(), u.id)) ++asymmetric;
      }
    }
    r.checks.push_back(make_check("neighbor_symmetry", 0, asymmetric));
  }

  long missing_device = 0;
  for (const Vertex& v : t.vertices()) {
    const bool needs = v.kind != VertexKind::awgr_in_port && v.kind != VertexKind::awgr_out_port;
    if (needs && (v.device.empty() || !t.devices().count(v.device))) ++missing_device;
    if (!needs && !v.device.empty()) ++missing_device;
  }
  r.checks.push_back(make_check("devices", 0, missing_device));

  long not_server = 0;
  for (int id : t.task_eligible()) {
    if (!t.has_vertex(id) || !t.is_server(id)) ++not_server;
  }
  r.checks.push_back(make_check("eligible_are_servers", 0, not_server));

  if (t.kind() == Kind::pon3) {
    // Inside one AWGR every (input, output) pair has exactly one wavelength
    // and an input reaches distinct outputs on distinct wavelengths.
    long broken = 0;
    std::map<int, std::vector<int>> outputs_by_awgr;
    for (const Vertex& v : t.vertices()) {
      if (v.kind == VertexKind::awgr_out_port) outputs_by_awgr[v.group].push_back(v.id);
    }
    for (const Vertex& in : t.vertices()) {
      if (in.kind != VertexKind::awgr_in_port) continue;
      std::set<int> used;
      for (int out : outputs_by_awgr[in.group]) {
        int count = 0, wave = -1;
        for (int w = 0; w < t.wavelengths(); ++w) {
          if (t.capacity(in.id, out, w)) ++count, wave = w;
        }
        if (count != 1 || !used.insert(wave).second) ++broken;
      }
    }
    r.checks.push_back(make_check("awgr_routing", 0, broken));
  }
  return r;
}

nlohmann::json to_json(const Topology& t) {
  nlohmann::json j;
  j["kind"] = to_string(t.kind());
  j["profile"] = to_string(t.profile());
  j["wavelengths"] = t.wavelengths();
  j["slot_seconds"] = t.slot_seconds();
  j["task_eligible"] = t.task_eligible();
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const Vertex& v : t.vertices()) {
    nlohmann::json jv = {{"id", v.id}, {"kind", to_string(v.kind)}, {"device", v.device}};
    if (v.group >= 0) jv["group"] = v.group;
    vs.push_back(std::move(jv));
  }
  auto& ls = j["links"] = nlohmann::json::array();
  for (const Link& l : t.links()) {
    ls.push_back({{"u", l.u},
                  {"v", l.v},
                  {"wavelength", l.wavelength},
                  {"capacity_gbps", l.capacity_gbps},
                  {"directed", l.directed}});
  }
  auto& ds = j["devices"] = nlohmann::json::object();
  for (const auto& [name, d] : t.devices()) {
    ds[name] = {{"max_power_watts", d.max_power_watts},
                {"power_law", to_string(d.power_law)},
                {"epsilon_w_per_gbps", d.epsilon_w_per_gbps},
                {"switching_gbps", d.switching_gbps}};
  }
  return j;
}

Topology topology_from_json(const nlohmann::json& j) {
  try {
    std::vector<Vertex> vertices;
    for (const auto& jv : j.at("vertices")) {
      vertices.push_back({jv.at("id").get<int>(), parse_vertex_kind(jv.at("kind").get<std::string>()),
                          jv.value("device", std::string()), jv.value("group", -1)});
    }
    std::vector<Link> links;
    for (const auto& jl : j.at("links")) {
      links.push_back({jl.at("u").get<int>(), jl.at("v").get<int>(), jl.value("wavelength", 0),
                       jl.value("capacity_gbps", kLinkGbps), jl.value("directed", false)});
    }
    std::map<std::string, DeviceSpec> devices = device_catalog();
    if (j.contains("devices")) {
      for (const auto& [name, jd] : j.at("devices").items()) {
        devices[name] = {name, jd.at("max_power_watts").get<double>(),
                         parse_power_law(jd.value("power_law", std::string("on_off"))),
                         jd.value("epsilon_w_per_gbps", 0.0), jd.value("switching_gbps", 0.0)};
      }
    }
    const Kind kind = parse_kind(j.at("kind").get<std::string>());
    return Topology(kind, parse_profile(j.value("profile", std::string("paper"))), std::move(vertices),
                    std::move(links), j.value("wavelengths", kind == Kind::pon3 ? 4 : 1),
                    j.at("task_eligible").get<std::vector<int>>(), j.at("slot_seconds").get<double>(),
                    std::move(devices));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed topology document: ") + e.what());
  }
}

}  // namespace shuffleopt::topo
