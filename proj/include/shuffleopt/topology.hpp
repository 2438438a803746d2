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

// Data-centre graphs with per-wavelength link capacities and device power
// records.
//
// Six kinds are generated in two sizes. The paper profile has 16
// task-eligible servers; the desk profile (2 racks of 2 servers, or the
// nearest equivalent of each structure) keeps scheduling models small
// enough for the internal solver.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace shuffleopt::topo {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { fat_tree, spine_leaf, bcube, dcell, pon3, pon5 };
enum class Profile { paper, desk };
enum class VertexKind { server, switch_, olt_port, awgr_in_port, awgr_out_port, backplane };
enum class PowerLaw { on_off, nic_offload };

std::string_view to_string(Kind k);
std::string_view to_string(Profile p);
std::string_view to_string(VertexKind k);
std::string_view to_string(PowerLaw p);
Kind parse_kind(std::string_view s);  // throws ConfigError
Profile parse_profile(std::string_view s);
const std::vector<Kind>& all_kinds();

struct DeviceSpec {
  std::string name;
  double max_power_watts = 0.0;
  PowerLaw power_law = PowerLaw::on_off;
  double epsilon_w_per_gbps = 0.0;  // nic_offload only
  double switching_gbps = 0.0;      // ingress budget for switch-like devices
};

/// Built-in catalog. Defaults: SG500XG-8F8T, Nexus-3524X, sfp_transceiver,
/// tunable_transceiver, PE10G2T-SR, olt_card, polymer_backplane, awgr.
/// Alternatives kept for sensitivity runs: SFP-10GDWZR-TC (2 W) and
/// fpga_nic (12.3 W).
const std::map<std::string, DeviceSpec>& device_catalog();

struct Vertex {
  int id = 0;
  VertexKind kind = VertexKind::server;
  std::string device;  // catalog key; empty for AWGR ports
  int group = -1;      // rack / cell / pod index, or AWGR index for ports
};

struct Link {
  int u = 0;
  int v = 0;
  int wavelength = 0;
  double capacity_gbps = 10.0;
  bool directed = false;
};

/// A directed, single-wavelength edge derived from the links.
struct Arc {
  int u = 0;
  int v = 0;
  int w = 0;
  double capacity = 0.0;
};

class Topology {
 public:
  Topology() = default;
  Topology(Kind kind, Profile profile, std::vector<Vertex> vertices, std::vector<Link> links,
           int wavelengths, std::vector<int> task_eligible, double slot_seconds,
           std::map<std::string, DeviceSpec> devices = device_catalog());

  Kind kind() const { return kind_; }
  Profile profile() const { return profile_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Link>& links() const { return links_; }
  int wavelengths() const { return wavelengths_; }
  const std::vector<int>& task_eligible() const { return task_eligible_; }
  double slot_seconds() const { return slot_seconds_; }
  const std::map<std::string, DeviceSpec>& devices() const { return devices_; }

  bool has_vertex(int id) const { return index_.count(id) > 0; }
  const Vertex& vertex(int id) const;  // throws ConfigError
  /// Device record of a server or switch-like vertex; throws ConfigError for
  /// unknown ids and for vertices without a device.
  const DeviceSpec& device_power(int id) const;

  /// Arcs sorted by (u, v, w).
  const std::vector<Arc>& arcs() const { return arcs_; }
  /// Out-neighbours of u in ascending id order.
  const std::vector<int>& neighbors(int u) const;
  std::optional<double> capacity(int u, int v, int w) const;

  std::vector<int> servers() const;
  /// Switches, backplanes and OLT ports: every powered non-server vertex.
  std::vector<int> switches() const;
  bool is_server(int id) const { return vertex(id).kind == VertexKind::server; }
  bool is_switch_like(int id) const;
  bool is_awgr_port(int id) const;

  /// Counts under the conventions used by the comparison table: switch-like
  /// vertices plus distinct AWGR devices; links as physical fibres (one per
  /// unordered pair, or per ordered pair for directed links) excluding those
  /// whose both ends are AWGR ports or OLT ports.
  int count_servers() const;
  int count_switches() const;
  int count_links() const;

 private:
  void index();

  Kind kind_ = Kind::fat_tree;
  Profile profile_ = Profile::paper;
  std::vector<Vertex> vertices_;
  std::vector<Link> links_;
  int wavelengths_ = 1;
  std::vector<int> task_eligible_;
  double slot_seconds_ = 1.0;
  std::map<std::string, DeviceSpec> devices_;

  std::map<int, std::size_t> index_;
  std::vector<Arc> arcs_;
  std::map<int, std::vector<int>> neighbors_;
  std::map<std::tuple<int, int, int>, double> capacity_;
};

/// Generates `kind` at the given profile. PON3 is derived from the bundled
/// AWGR wiring fixtures (5 communicating vertices for the paper profile, 3
/// for the desk profile).
Topology build_topology(Kind kind, Profile profile = Profile::paper);

struct ExpectedCounts {
  int servers = 0;
  int switches = 0;
  int links = 0;
  int wavelengths = 0;
  int task_eligible = 0;
};
ExpectedCounts expected_counts(Kind kind, Profile profile);

struct Check {
  std::string name;
  bool passed = false;
  std::string expected;
  std::string actual;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool ok() const;
  const Check* find(std::string_view name) const;
};

/// Checks vertex, link and wavelength counts against expected_counts(),
/// capacity positivity, neighbour symmetry (all kinds but PON3), device
/// references, and that task-eligible ids are servers.
ValidationReport validate_topology(const Topology& t);

nlohmann::json to_json(const Topology& t);
Topology topology_from_json(const nlohmann::json& j);  // throws ConfigError

}  // namespace shuffleopt::topo
