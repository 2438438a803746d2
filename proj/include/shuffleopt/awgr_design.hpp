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

// Port wiring and wavelength assignment for a PON cell built around two
// M x M AWGRs.
//
// Node numbering inside an instance: communicating vertices first (0 is the
// OLT port, 1..G-1 are PON groups), then AWGR ports. Input port p of AWGR k
// is G + 2kM + p and its output port p is G + 2kM + M + p (k, p zero based).
// Wavelength j is stored zero based; j = 0 is the first wavelength.
//
// The model keeps the flow variables on physically directed arcs only:
// communicating vertex -> input port, output port -> communicating vertex,
// output port -> input port (other AWGR: trunk; same AWGR: reverse of an
// internal arc, always blocked), and input -> output inside one AWGR. The
// adjacency variables exist for both orientations and are tied together by
// the mutuality rows.

#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shuffleopt/milp_model.hpp"
#include "shuffleopt/topology.hpp"

namespace shuffleopt::awgr {

using topo::ConfigError;

struct AwgrInstance {
  int G = 5;
  int K = 2;
  int M = 4;

  /// G communicating vertices, two AWGRs of size G-1. Throws ConfigError
  /// for G < 3.
  static AwgrInstance for_groups(int G);

  int wavelengths() const { return G - 1; }
  int num_nodes() const { return G + 2 * K * M; }
  int input(int k, int p) const { return G + 2 * k * M + p; }
  int output(int k, int p) const { return G + 2 * k * M + M + p; }
  bool is_comm(int n) const { return n >= 0 && n < G; }
  bool is_input(int n) const;
  bool is_output(int n) const;
  int awgr_of(int port) const { return (port - G) / (2 * M); }
  int port_index(int port) const { return (port - G) % M; }
  /// "T", "g3", "I1_2", "O2_4" (AWGR and port numbers one based).
  std::string name(int n) const;
  /// Number of M/2 - 1 trunks allowed per ordered AWGR pair (floor).
  int trunk_limit() const { return M / 2 - 1; }
};

struct Hop {
  int from = 0;
  int to = 0;
  int wavelength = 0;
  friend bool operator==(const Hop&, const Hop&) = default;
};

using Pair = std::pair<int, int>;

struct AwgrWiring {
  AwgrInstance inst;
  /// External connections in signal direction: transmit fibres (vertex ->
  /// input port), receive fibres (output port -> vertex) and trunks (output
  /// port -> input port of the other AWGR). Internal AWGR arcs are implied.
  std::set<Pair> beta;
  std::map<Pair, int> mu;                  // (s, d) -> wavelength
  std::map<Pair, std::vector<Hop>> paths;  // (s, d) -> arcs from s to d
};

/// Number of AWGR traversals on a path (internal arcs it uses).
int hop_count(const AwgrInstance& inst, const std::vector<Hop>& path);

/// The MILP: maximise the number of connected pairs. Every row carries a
/// semantic family tag, listed by awgr_families().
milp::Model build_awgr_model(const AwgrInstance& inst);
const std::vector<std::string>& awgr_families();

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rounds binaries at 1e-6 and follows flow arcs from each source to its
/// destination. Throws DecodeError on a fractional binary or a broken path.
AwgrWiring decode_wiring(const milp::Assignment& a, const AwgrInstance& inst);

/// The variable values that realise `w` in build_awgr_model(w.inst);
/// status optimal, objective = number of connected pairs.
milp::Assignment wiring_assignment(const AwgrWiring& w);

struct WiringReport {
  std::vector<topo::Check> checks;
  int connections = 0;
  std::map<Pair, int> hops;
  bool ok() const;
  const topo::Check* find(std::string_view name) const;
};

/// Direct checks on the wiring: single_wavelength, destination_wavelength,
/// source_wavelength, continuity, no_relay, awgr_routing, ports (each port
/// joined to at most one external endpoint, trunk limit), and connections
/// (a full mesh G(G-1), reported in `connections`).
WiringReport verify_wiring(const AwgrWiring& w);

/// Fixture for G = 5: four racks and one OLT port on two 4 x 4 AWGRs,
/// twenty connections, four of them through a trunk.
AwgrWiring table_wiring();
/// Fixture for G = 3: two racks and one OLT port on two 2 x 2 AWGRs.
AwgrWiring three_group_wiring();

/// Each AWGR's wavelength table: table[k][p_in][p_out] = wavelength. Cells
/// fixed by the paths are kept; the rest are filled to a Latin square.
/// Throws ConfigError if no completion exists.
std::vector<std::vector<std::vector<int>>> routing_tables(const AwgrWiring& w);

/// PON3 topology realising the wiring: per-wavelength directed fibres,
/// Latin-square AWGR internals, one backplane per rack. Throws ConfigError
/// if the wiring fails verification.
topo::Topology wiring_to_topology(const AwgrWiring& w, int servers_per_rack,
                                  topo::Profile profile = topo::Profile::paper);

nlohmann::json to_json(const AwgrWiring& w);
AwgrWiring wiring_from_json(const nlohmann::json& j);  // throws ConfigError

}  // namespace shuffleopt::awgr
