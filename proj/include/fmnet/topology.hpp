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

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fmnet {

using SwitchId = int;
using PortId = int;

// Directed link between two switches.
struct Arc {
  SwitchId src = 0;
  SwitchId dst = 0;
  auto operator<=>(const Arc&) const = default;
};

// Switch graph with local port numbering. Network ports of switch s are
// 0..degree(s)-1; port p leads to neighbor(s, p). Servers hang off each switch
// but are not part of the graph.
class Topology {
 public:
  // K_n: every switch connected to every other one. Port p of switch s leads
  // to p when p < s and to p + 1 otherwise.
  static Topology complete_graph(int n, int servers_per_switch);

  // Cartesian product of complete graphs. Switch id is the mixed-radix value
  // of its coordinates with dims[0] varying fastest. Ports are grouped by
  // dimension (dims[0]-1 ports first, ...).
  static Topology hyperx(const std::vector<int>& dims, int servers_per_switch);

  int switches() const { return n_; }
  int servers_per_switch() const { return servers_per_switch_; }
  int servers() const { return n_ * servers_per_switch_; }
  int degree(SwitchId s) const { return static_cast<int>(neighbors_[s].size()); }
  int max_degree() const { return max_degree_; }

  SwitchId neighbor(SwitchId s, PortId p) const { return neighbors_[s][p]; }
  const std::vector<SwitchId>& neighbors(SwitchId s) const { return neighbors_[s]; }
  // -1 when the two switches are not adjacent.
  PortId port_to(SwitchId s, SwitchId t) const { return port_table_[static_cast<size_t>(s) * n_ + t]; }
  bool adjacent(SwitchId s, SwitchId t) const { return port_to(s, t) >= 0; }

  int arc_count() const { return static_cast<int>(arcs_.size()); }
  int arc_id(SwitchId s, PortId p) const { return arc_offset_[s] + p; }
  int arc_id(const Arc& a) const { return arc_id(a.src, port_to(a.src, a.dst)); }
  const Arc& arc(int id) const { return arcs_[id]; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  bool is_complete() const { return arc_count() == n_ * (n_ - 1); }
  // Empty for a complete graph; the radix vector for hyperx().
  const std::vector<int>& hyperx_dims() const { return hyperx_dims_; }
  std::vector<int> hyperx_coords(SwitchId s) const;
  // Dimension in which adjacent switches a and b differ (hyperx only).
  int hyperx_dim_of(SwitchId a, SwitchId b) const;

  // Eccentricity-based diameter over the switch graph (BFS).
  int diameter() const;

  std::string describe() const;

 private:
  Topology() = default;
  void finalize();

  int n_ = 0;
  int servers_per_switch_ = 0;
  int max_degree_ = 0;
  std::vector<std::vector<SwitchId>> neighbors_;
  std::vector<int16_t> port_table_;
  std::vector<int> arc_offset_;
  std::vector<Arc> arcs_;
  std::vector<int> hyperx_dims_;
};

}  // namespace fmnet
