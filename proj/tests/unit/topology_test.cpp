/*
 * Copyright 2026 The fmnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <set>

#include "fmnet/errors.hpp"
#include "fmnet/topology.hpp"

namespace fmnet {
namespace {

TEST(CompleteGraph, ArcCounts) {
  EXPECT_EQ(Topology::complete_graph(2, 1).arc_count(), 2);
  EXPECT_EQ(Topology::complete_graph(4, 1).arc_count(), 12);
  EXPECT_EQ(Topology::complete_graph(64, 64).arc_count(), 4032);
}

TEST(CompleteGraph, PortNumbering) {
  const Topology t = Topology::complete_graph(5, 3);
  EXPECT_EQ(t.servers(), 15);
  for (SwitchId s = 0; s < 5; ++s) {
    ASSERT_EQ(t.degree(s), 4);
    for (PortId p = 0; p < 4; ++p) {
      const SwitchId want = p < s ? p : p + 1;
      EXPECT_EQ(t.neighbor(s, p), want);
      EXPECT_EQ(t.port_to(s, want), p);
    }
    EXPECT_EQ(t.port_to(s, s), -1);
  }
  EXPECT_TRUE(t.is_complete());
  EXPECT_EQ(t.diameter(), 1);
}

TEST(CompleteGraph, ArcIdsAreABijection) {
  const Topology t = Topology::complete_graph(7, 1);
  std::set<Arc> seen;
  for (int id = 0; id < t.arc_count(); ++id) {
    const Arc& a = t.arc(id);
    EXPECT_NE(a.src, a.dst);
    EXPECT_EQ(t.arc_id(a), id);
    seen.insert(a);
  }
  EXPECT_EQ(static_cast<int>(seen.size()), 42);
}

TEST(CompleteGraph, RejectsTooSmall) {
  EXPECT_THROW(Topology::complete_graph(1, 1), std::invalid_argument);
  EXPECT_THROW(Topology::complete_graph(4, -1), std::invalid_argument);
  EXPECT_EQ(Topology::complete_graph(4, 0).servers(), 0);  // switch-only graphs are allowed
}

TEST(HyperX, EightByEight) {
  const Topology t = Topology::hyperx({8, 8}, 8);
  EXPECT_EQ(t.switches(), 64);
  EXPECT_EQ(t.servers(), 512);
  EXPECT_EQ(t.max_degree(), 14);
  EXPECT_EQ(t.arc_count(), 64 * 14);
  EXPECT_EQ(t.diameter(), 2);
  EXPECT_FALSE(t.is_complete());
  // Switch 9 is (1, 1); its first 7 ports stay in dimension 0.
  EXPECT_EQ(t.hyperx_coords(9), (std::vector<int>{1, 1}));
  for (PortId p = 0; p < 7; ++p) EXPECT_EQ(t.hyperx_dim_of(9, t.neighbor(9, p)), 0);
  for (PortId p = 7; p < 14; ++p) EXPECT_EQ(t.hyperx_dim_of(9, t.neighbor(9, p)), 1);
  EXPECT_FALSE(t.adjacent(0, 9));
}

}  // namespace
}  // namespace fmnet
