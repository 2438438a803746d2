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

#include "shuffleopt/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace shuffleopt::traffic {
namespace {

// Unbiased index in [0, n) by rejection.
std::uint64_t draw_index(std::mt19937_64& g, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t x = g();
    if (x < limit) return x % n;
  }
}

// Uniform in (0, 1].
double draw_unit(std::mt19937_64& g) {
  return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

TaskCounts task_counts(topo::Profile p) {
  return p == topo::Profile::paper ? TaskCounts{10, 6} : TaskCounts{2, 2};
}

double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + c;
}

double DemandMatrix::sum() const {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& [k, g] : entries) v.push_back(g);
  return compensated_sum(v);
}

Placement place_tasks(const topo::Topology& t, std::uint64_t seed) {
  return place_tasks(t, seed, task_counts(t.profile()));
}

Placement place_tasks(const topo::Topology& t, std::uint64_t seed, TaskCounts counts) {
  if (counts.maps <= 0 || counts.reduces <= 0) throw TrafficError("task counts must be positive");
  std::vector<int> pool = t.task_eligible();
  std::sort(pool.begin(), pool.end());
  const std::size_t need = static_cast<std::size_t>(counts.maps + counts.reduces);
  if (pool.size() < need) {
    throw TrafficError("placement needs " + std::to_string(need) + " task-eligible servers, topology has " +
                       std::to_string(pool.size()));
  }
  std::mt19937_64 g(seed);
  for (std::size_t i = 0; i < need; ++i) {
    const std::size_t k = i + draw_index(g, pool.size() - i);
    std::swap(pool[i], pool[k]);
  }
  Placement p;
  p.seed = seed;
  p.map_servers.assign(pool.begin(), pool.begin() + counts.maps);
  p.reduce_servers.assign(pool.begin() + counts.maps, pool.begin() + static_cast<std::ptrdiff_t>(need));
  std::sort(p.map_servers.begin(), p.map_servers.end());
  std::sort(p.reduce_servers.begin(), p.reduce_servers.end());
  return p;
}

DemandMatrix gen_demand_uniform(const Placement& p, double total_gbits) {
  if (!(total_gbits >= 0.0) || !std::isfinite(total_gbits)) throw TrafficError("total volume must be >= 0");
  DemandMatrix d;
  d.total_gbits = total_gbits;
  d.seed = p.seed;
  const double each = total_gbits / static_cast<double>(p.map_servers.size() * p.reduce_servers.size());
  for (int s : p.map_servers) {
    for (int r : p.reduce_servers) d.entries[{s, r}] = each;
  }
  return d;
}

DemandMatrix gen_demand_skewed(const Placement& p, double total_gbits, std::uint64_t seed) {
  if (!(total_gbits > 0.0) || !std::isfinite(total_gbits)) throw TrafficError("skewed volume must be > 0");
  std::mt19937_64 g(seed);
  std::vector<double> raw;
  for (std::size_t i = 0; i < p.map_servers.size(); ++i) raw.push_back(total_gbits * draw_unit(g));
  const double scale = total_gbits / compensated_sum(raw);
  const double reducers = static_cast<double>(p.reduce_servers.size());
  DemandMatrix d;
  d.total_gbits = total_gbits;
  d.skewed = true;
  d.seed = seed;
  for (std::size_t i = 0; i < p.map_servers.size(); ++i) {
    for (int r : p.reduce_servers) d.entries[{p.map_servers[i], r}] = raw[i] * scale / reducers;
  }
  return d;
}

std::string to_csv(const DemandMatrix& d) {
  std::string out = "src,dst,gbits\n";
  for (const auto& [k, g] : d.entries) {
    if (g == 0.0) continue;
    out += std::to_string(k.first) + "," + std::to_string(k.second) + "," + format_double(g) + "\n";
  }
  return out;
}

nlohmann::json sidecar_json(const DemandMatrix& d) {
  return {{"total_gbits", d.total_gbits}, {"skewed", d.skewed}, {"seed", d.seed}};
}

DemandMatrix demand_from_csv(const std::string& csv, const nlohmann::json& sidecar) {
  DemandMatrix d;
  try {
    d.total_gbits = sidecar.at("total_gbits").get<double>();
    d.skewed = sidecar.at("skewed").get<bool>();
    d.seed = sidecar.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw TrafficError(std::string("demand sidecar: ") + e.what());
  }
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "src,dst,gbits") throw TrafficError("demand CSV: missing header");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    int s = 0, r = 0;
    double g = 0.0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto bad = [&] { return TrafficError("demand CSV line " + std::to_string(lineno) + ": " + line); };
    auto r1 = std::from_chars(p, end, s);
    if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',') throw bad();
    auto r2 = std::from_chars(r1.ptr + 1, end, r);
    if (r2.ec != std::errc() || r2.ptr == end || *r2.ptr != ',') throw bad();
    auto r3 = std::from_chars(r2.ptr + 1, end, g);
    if (r3.ec != std::errc() || r3.ptr != end || !(g >= 0.0)) throw bad();
    if (!d.entries.emplace(std::pair{s, r}, g).second) throw bad();
  }
  return d;
}

nlohmann::json to_json(const Placement& p) {
  return {{"map_servers", p.map_servers}, {"reduce_servers", p.reduce_servers}, {"seed", p.seed}};
}

}  // namespace shuffleopt::traffic
