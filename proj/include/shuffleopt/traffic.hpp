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

// Map/reduce task placement and the shuffle demand between them.
//
// Randomness comes from std::mt19937_64 seeded with the caller's seed. Draws
// are mapped to indices and reals by hand (rejection sampling, 53-bit
// mantissas) so results do not depend on the standard library's
// distribution classes.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shuffleopt/topology.hpp"

namespace shuffleopt::traffic {

class TrafficError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TaskCounts {
  int maps = 10;
  int reduces = 6;
};

/// 10 maps and 6 reduces on the paper profile, 2 and 2 on the desk one.
TaskCounts task_counts(topo::Profile p);

struct Placement {
  std::vector<int> map_servers;     // ascending
  std::vector<int> reduce_servers;  // ascending
  std::uint64_t seed = 0;
};

struct DemandMatrix {
  std::map<std::pair<int, int>, double> entries;  // (map, reduce) -> Gbit
  double total_gbits = 0.0;
  bool skewed = false;
  std::uint64_t seed = 0;

  /// Compensated sum of the entries.
  double sum() const;
};

/// Disjoint map and reduce sets drawn without replacement from the
/// task-eligible servers. Throws TrafficError when there are too few.
Placement place_tasks(const topo::Topology& t, std::uint64_t seed);
Placement place_tasks(const topo::Topology& t, std::uint64_t seed, TaskCounts counts);

/// Every flow carries total / (maps x reduces).
DemandMatrix gen_demand_uniform(const Placement& p, double total_gbits);

/// One raw weight per map server, uniform in (0, total]; each map output is
/// split evenly over the reducers and everything is rescaled by a single
/// factor so the entries sum to `total_gbits`.
DemandMatrix gen_demand_skewed(const Placement& p, double total_gbits, std::uint64_t seed);

/// Neumaier summation.
double compensated_sum(const std::vector<double>& values);

/// `src,dst,gbits` with one row per nonzero flow, values at full precision.
std::string to_csv(const DemandMatrix& d);
/// `total_gbits`, `skewed` and `seed`.
nlohmann::json sidecar_json(const DemandMatrix& d);
/// Inverse of to_csv plus sidecar_json. Throws TrafficError on bad input.
DemandMatrix demand_from_csv(const std::string& csv, const nlohmann::json& sidecar);

nlohmann::json to_json(const Placement& p);

}  // namespace shuffleopt::traffic
