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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "shuffleopt/traffic.hpp"

namespace shuffleopt::traffic {
namespace {

using topo::Kind;
using topo::Profile;

TEST(PlacementTest, PaperSplitIsDisjointAndEligible) {
  for (Kind k : topo::all_kinds()) {
    const topo::Topology t = topo::build_topology(k);
    const std::set<int> eligible(t.task_eligible().begin(), t.task_eligible().end());
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      const Placement p = place_tasks(t, seed);
      ASSERT_EQ(p.map_servers.size(), 10u);
      ASSERT_EQ(p.reduce_servers.size(), 6u);
      std::set<int> all(p.map_servers.begin(), p.map_servers.end());
      all.insert(p.reduce_servers.begin(), p.reduce_servers.end());
      EXPECT_EQ(all.size(), 16u);
      for (int s : all) EXPECT_TRUE(eligible.count(s)) << s;
      EXPECT_TRUE(std::is_sorted(p.map_servers.begin(), p.map_servers.end()));
    }
  }
}

TEST(PlacementTest, SameSeedSamePlacement) {
  const topo::Topology t = topo::build_topology(Kind::fat_tree);
  EXPECT_EQ(to_json(place_tasks(t, 1)).dump(), to_json(place_tasks(t, 1)).dump());
  EXPECT_NE(to_json(place_tasks(t, 1)).dump(), to_json(place_tasks(t, 2)).dump());
}

TEST(PlacementTest, DcellRelayCellGetsNoTasks) {
  const topo::Topology t = topo::build_topology(Kind::dcell);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Placement p = place_tasks(t, seed);
    for (const auto* set : {&p.map_servers, &p.reduce_servers}) {
      for (int s : *set) EXPECT_NE(t.vertex(s).group, 4) << s;
    }
  }
}

TEST(PlacementTest, TooFewServersIsAnError) {
  const topo::Topology t = topo::build_topology(Kind::spine_leaf, Profile::desk);
  EXPECT_THROW(place_tasks(t, 1, TaskCounts{10, 6}), TrafficError);
  const Placement p = place_tasks(t, 1);
  EXPECT_EQ(p.map_servers.size(), 2u);
  EXPECT_EQ(p.reduce_servers.size(), 2u);
}

// Chi-square style sanity: over many seeds every eligible server lands in
// the map set with frequency close to 10/16.
TEST(PlacementTest, DrawIsRoughlyUniform) {
  const topo::Topology t = topo::build_topology(Kind::bcube);
  std::map<int, int> hits;
  const int runs = 4000;
  for (int seed = 0; seed < runs; ++seed) {
    for (int s : place_tasks(t, static_cast<std::uint64_t>(seed)).map_servers) ++hits[s];
  }
  for (int s : t.task_eligible()) EXPECT_NEAR(hits[s] / static_cast<double>(runs), 10.0 / 16.0, 0.04) << s;
}

TEST(DemandTest, UniformSplitsEvenly) {
  const Placement p = place_tasks(topo::build_topology(Kind::fat_tree), 1);
  const DemandMatrix d = gen_demand_uniform(p, 60.0);
  ASSERT_EQ(d.entries.size(), 60u);
  for (const auto& [k, g] : d.entries) {
    EXPECT_DOUBLE_EQ(g, 1.0);
    EXPECT_TRUE(std::count(p.map_servers.begin(), p.map_servers.end(), k.first));
    EXPECT_TRUE(std::count(p.reduce_servers.begin(), p.reduce_servers.end(), k.second));
  }
  EXPECT_FALSE(d.skewed);
}

TEST(DemandTest, UniformEdgeVolumes) {
  const Placement p = place_tasks(topo::build_topology(Kind::fat_tree), 1);
  const DemandMatrix zero = gen_demand_uniform(p, 0.0);
  for (const auto& [k, g] : zero.entries) EXPECT_EQ(g, 0.0);
  EXPECT_EQ(to_csv(zero), "src,dst,gbits\n");
  const DemandMatrix one = gen_demand_uniform(p, 1.0);
  EXPECT_DOUBLE_EQ(one.entries.begin()->second, 1.0 / 60.0);
  EXPECT_NEAR(one.sum(), 1.0, 1e-15);
  EXPECT_THROW(gen_demand_uniform(p, -1.0), TrafficError);
}

TEST(DemandTest, SkewedConservesVolumeAndIsDeterministic) {
  const Placement p = place_tasks(topo::build_topology(Kind::pon3), 3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const DemandMatrix d = gen_demand_skewed(p, 60.0, seed);
    EXPECT_NEAR(d.sum(), 60.0, 60.0 * 1e-9);
    std::map<int, double> per_map;
    for (const auto& [k, g] : d.entries) {
      EXPECT_GE(g, 0.0);
      per_map[k.first] += g;
    }
    for (const auto& [s, out] : per_map) EXPECT_LE(out, 60.0);
  }
  EXPECT_EQ(to_csv(gen_demand_skewed(p, 60.0, 7)), to_csv(gen_demand_skewed(p, 60.0, 7)));
  EXPECT_THROW(gen_demand_skewed(p, 0.0, 7), TrafficError);
}

// Each map output is spread evenly, so the six flows of one mapper agree.
TEST(DemandTest, SkewedRowsAreFlat) {
  const Placement p = place_tasks(topo::build_topology(Kind::pon5), 4);
  const DemandMatrix d = gen_demand_skewed(p, 30.0, 11);
  for (int s : p.map_servers) {
    const double first = d.entries.at({s, p.reduce_servers.front()});
    for (int r : p.reduce_servers) EXPECT_EQ(d.entries.at({s, r}), first);
  }
}

TEST(DemandTest, SkewBracketsTheUniformValue) {
  const Placement p = place_tasks(topo::build_topology(Kind::fat_tree), 1);
  double lo = 1e9, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const auto& [k, g] : gen_demand_skewed(p, 60.0, seed).entries) {
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
  }
  EXPECT_LT(lo, 1.0);
  EXPECT_GT(hi, 1.0);
}

TEST(DemandTest, CompensatedSumBeatsNaive) {
  const std::vector<double> v = {1e16, 1.0, -1e16, 3.0};
  EXPECT_EQ(compensated_sum(v), 4.0);
  EXPECT_EQ(compensated_sum({1.0, 1e100, 1.0, -1e100}), 2.0);
}

TEST(DemandTest, CsvRoundTripIsExact) {
  const Placement p = place_tasks(topo::build_topology(Kind::dcell), 5);
  const DemandMatrix d = gen_demand_skewed(p, 17.3, 21);
  const std::string csv = to_csv(d);
  EXPECT_EQ(csv.rfind("src,dst,gbits\n", 0), 0u);
  const DemandMatrix back = demand_from_csv(csv, nlohmann::json::parse(sidecar_json(d).dump()));
  EXPECT_EQ(back.entries, d.entries);
  EXPECT_EQ(back.seed, 21u);
  EXPECT_TRUE(back.skewed);
  EXPECT_DOUBLE_EQ(back.total_gbits, 17.3);
  EXPECT_EQ(to_csv(back), csv);
}

TEST(DemandTest, MalformedCsvIsRejected) {
  const nlohmann::json side = {{"total_gbits", 1.0}, {"skewed", false}, {"seed", 0}};
  EXPECT_THROW(demand_from_csv("a,b,c\n", side), TrafficError);
  EXPECT_THROW(demand_from_csv("src,dst,gbits\n1,2\n", side), TrafficError);
  EXPECT_THROW(demand_from_csv("src,dst,gbits\n1,2,-3\n", side), TrafficError);
  EXPECT_THROW(demand_from_csv("src,dst,gbits\n1,2,3\n1,2,4\n", side), TrafficError);
  EXPECT_THROW(demand_from_csv("src,dst,gbits\n", nlohmann::json::object()), TrafficError);
}

}  // namespace
}  // namespace shuffleopt::traffic
