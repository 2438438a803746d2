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

#include <deque>
#include <set>

#include "shuffleopt/topology.hpp"

namespace shuffleopt::topo {
namespace {

struct Row {
  Kind kind;
  int servers, switches, links, wavelengths;
};

// Comparison-table rows, written out independently of expected_counts().
const Row kPaperRows[] = {
    {Kind::fat_tree, 16, 20, 48, 1}, {Kind::spine_leaf, 16, 6, 24, 1}, {Kind::bcube, 16, 8, 32, 1},
    {Kind::dcell, 20, 5, 30, 1},     {Kind::pon3, 16, 7, 64, 4},       {Kind::pon5, 16, 5, 23, 1},
};

// Hand counts for 2 racks of 2 servers (or the nearest structure).
const Row kDeskRows[] = {
    {Kind::fat_tree, 4, 5, 8, 1}, {Kind::spine_leaf, 4, 3, 6, 1}, {Kind::bcube, 4, 4, 8, 1},
    {Kind::dcell, 6, 3, 9, 1},    {Kind::pon3, 4, 5, 16, 2},      {Kind::pon5, 4, 3, 7, 1},
};

TEST(TopologyTest, PaperCountsMatchComparisonTable) {
  for (const Row& r : kPaperRows) {
    const Topology t = build_topology(r.kind, Profile::paper);
    SCOPED_TRACE(std::string(to_string(r.kind)));
    EXPECT_EQ(t.count_servers(), r.servers);
    EXPECT_EQ(t.count_switches(), r.switches);
    EXPECT_EQ(t.count_links(), r.links);
    EXPECT_EQ(t.wavelengths(), r.wavelengths);
    EXPECT_EQ(t.task_eligible().size(), 16u);
  }
}

TEST(TopologyTest, DeskCounts) {
  for (const Row& r : kDeskRows) {
    const Topology t = build_topology(r.kind, Profile::desk);
    SCOPED_TRACE(std::string(to_string(r.kind)));
    EXPECT_EQ(t.count_servers(), r.servers);
    EXPECT_EQ(t.count_switches(), r.switches);
    EXPECT_EQ(t.count_links(), r.links);
    EXPECT_EQ(t.wavelengths(), r.wavelengths);
    EXPECT_EQ(t.task_eligible().size(), 4u);
  }
}

TEST(TopologyTest, FatTreeLinkFormula) {
  const int k = 4;
  EXPECT_EQ(build_topology(Kind::fat_tree).count_links(), 3 * k * k * k / 4);
}

class EveryKind : public ::testing::TestWithParam<std::tuple<Kind, Profile>> {};

TEST_P(EveryKind, ValidatesCleanly) {
  const auto [kind, profile] = GetParam();
  const ValidationReport r = validate_topology(build_topology(kind, profile));
  for (const Check& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.expected << " vs " << c.actual;
}

TEST_P(EveryKind, AllCapacitiesAreTenGbps) {
  const auto [kind, profile] = GetParam();
  const Topology t = build_topology(kind, profile);
  for (const Arc& a : t.arcs()) EXPECT_DOUBLE_EQ(a.capacity, 10.0);
}

// Breadth-first search over directed arcs: every eligible server reaches
// every other one.
TEST_P(EveryKind, EligibleServersAreMutuallyReachable) {
  const auto [kind, profile] = GetParam();
  const Topology t = build_topology(kind, profile);
  for (int s : t.task_eligible()) {
    std::set<int> seen = {s};
    std::deque<int> queue = {s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : t.neighbors(u)) {
        if (seen.insert(v).second) queue.push_back(v);
      }
    }
    for (int d : t.task_eligible()) EXPECT_TRUE(seen.count(d)) << s << " cannot reach " << d;
  }
}

TEST_P(EveryKind, JsonRoundTripIsStable) {
  const auto [kind, profile] = GetParam();
  const Topology t = build_topology(kind, profile);
  const nlohmann::json j = to_json(t);
  for (const char* field : {"kind", "vertices", "links", "task_eligible", "slot_seconds"}) {
    EXPECT_TRUE(j.contains(field)) << field;
  }
  for (const char* field : {"u", "v", "wavelength", "capacity_gbps", "directed"}) {
    EXPECT_TRUE(j["links"][0].contains(field)) << field;
  }
  const Topology back = topology_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_TRUE(validate_topology(back).ok());
}

INSTANTIATE_TEST_SUITE_P(Kinds, EveryKind,
                         ::testing::Combine(::testing::ValuesIn(all_kinds()),
                                            ::testing::Values(Profile::paper, Profile::desk)));

TEST(TopologyTest, RemovedLinkFailsLinkCount) {
  const Topology t = build_topology(Kind::fat_tree);
  std::vector<Link> links = t.links();
  links.pop_back();
  const Topology cut(t.kind(), t.profile(), t.vertices(), links, t.wavelengths(), t.task_eligible(),
                     t.slot_seconds());
  const ValidationReport r = validate_topology(cut);
  const Check* c = r.find("links");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_EQ(c->expected, "48");
  EXPECT_EQ(c->actual, "47");
}

TEST(TopologyTest, SingleWavelengthPonFailsWavelengthCheck) {
  const Topology t = build_topology(Kind::pon3);
  const Topology grey(t.kind(), t.profile(), t.vertices(), t.links(), 1, t.task_eligible(), t.slot_seconds());
  const Check* c = validate_topology(grey).find("wavelengths");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
}

TEST(TopologyTest, DevicePower) {
  const Topology sl = build_topology(Kind::spine_leaf);
  const DeviceSpec& sw = sl.device_power(sl.switches().front());
  EXPECT_DOUBLE_EQ(sw.max_power_watts, 193.0);
  EXPECT_EQ(sw.power_law, PowerLaw::on_off);
  EXPECT_DOUBLE_EQ(sw.epsilon_w_per_gbps, 0.0);

  const Topology bc = build_topology(Kind::bcube);
  const DeviceSpec& nic = bc.device_power(bc.servers().front());
  EXPECT_DOUBLE_EQ(nic.max_power_watts, 14.0);
  EXPECT_DOUBLE_EQ(nic.epsilon_w_per_gbps, 14.29);
  EXPECT_EQ(nic.power_law, PowerLaw::nic_offload);

  for (Kind k : {Kind::pon3, Kind::pon5}) {
    const Topology t = build_topology(k);
    int olts = 0;
    for (const Vertex& v : t.vertices()) {
      if (v.kind != VertexKind::olt_port) continue;
      ++olts;
      EXPECT_DOUBLE_EQ(t.device_power(v.id).max_power_watts, 217.0);
      EXPECT_EQ(t.device_power(v.id).power_law, PowerLaw::on_off);
    }
    EXPECT_EQ(olts, 1);
  }
  EXPECT_DOUBLE_EQ(build_topology(Kind::fat_tree).device_power(17).max_power_watts, 94.33);
  EXPECT_THROW(sl.device_power(999), ConfigError);
}

TEST(TopologyTest, AwgrPortsCarryNoPower) {
  const Topology t = build_topology(Kind::pon3);
  for (const Vertex& v : t.vertices()) {
    if (t.is_awgr_port(v.id)) EXPECT_THROW(t.device_power(v.id), ConfigError);
  }
}

TEST(TopologyTest, CatalogInvariants) {
  for (const auto& [name, d] : device_catalog()) {
    EXPECT_GE(d.max_power_watts, 0.0) << name;
    if (d.power_law == PowerLaw::on_off) EXPECT_EQ(d.epsilon_w_per_gbps, 0.0) << name;
  }
  EXPECT_DOUBLE_EQ(device_catalog().at("SFP-10GDWZR-TC").max_power_watts, 2.0);
  EXPECT_DOUBLE_EQ(device_catalog().at("polymer_backplane").max_power_watts, 12.0);
}

TEST(TopologyTest, DcellLastCellRelaysOnly) {
  const Topology t = build_topology(Kind::dcell);
  std::set<int> eligible(t.task_eligible().begin(), t.task_eligible().end());
  for (int s : t.servers()) EXPECT_EQ(eligible.count(s) == 0, t.vertex(s).group == 4) << s;
}

TEST(TopologyTest, Pon3Numbering) {
  const Topology t = build_topology(Kind::pon3);
  for (int id = 1; id <= 16; ++id) EXPECT_TRUE(t.is_awgr_port(id)) << id;
  EXPECT_EQ(t.vertex(17).kind, VertexKind::olt_port);
  for (int id = 18; id <= 21; ++id) EXPECT_EQ(t.vertex(id).kind, VertexKind::backplane);
  const std::vector<int> servers = t.servers();
  ASSERT_EQ(servers.size(), 16u);
  EXPECT_EQ(servers.front(), 22);
  EXPECT_EQ(servers.back(), 37);
  EXPECT_EQ(t.vertex(25).group, 0);
  EXPECT_EQ(t.vertex(34).group, 3);
  EXPECT_DOUBLE_EQ(t.slot_seconds(), 0.25);
}

TEST(TopologyTest, Pon3ServersTransmitOnEveryWavelength) {
  const Topology t = build_topology(Kind::pon3);
  for (int s : t.servers()) {
    int tx = 0;
    for (int v : t.neighbors(s)) {
      if (t.vertex(v).kind != VertexKind::awgr_in_port) continue;
      ++tx;
      for (int w = 0; w < 4; ++w) EXPECT_TRUE(t.capacity(s, v, w).has_value());
    }
    EXPECT_EQ(tx, 1) << s;
  }
}

TEST(TopologyTest, NonPonKindsAreSymmetric) {
  for (Kind k : all_kinds()) {
    if (k == Kind::pon3) continue;
    const Topology t = build_topology(k);
    for (const Arc& a : t.arcs()) EXPECT_TRUE(t.capacity(a.v, a.u, a.w).has_value());
  }
}

TEST(TopologyTest, MalformedDocumentsAreRejected) {
  EXPECT_THROW(parse_kind("torus"), ConfigError);
  EXPECT_THROW(topology_from_json(nlohmann::json{{"kind", "fat_tree"}}), ConfigError);
  nlohmann::json j = to_json(build_topology(Kind::spine_leaf, Profile::desk));
  j["links"].push_back({{"u", 1}, {"v", 999}});
  EXPECT_THROW(topology_from_json(j), ConfigError);
}

}  // namespace
}  // namespace shuffleopt::topo
