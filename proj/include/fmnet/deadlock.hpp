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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fmnet/routing.hpp"

namespace fmnet {

struct Channel {
  int arc = 0;  // topology arc id
  int vc = 0;
  auto operator<=>(const Channel&) const = default;
};

// Channel dependency graph over (arc, vc) pairs. Node id = arc * vcs + vc.
class ChannelDependencyGraph {
 public:
  ChannelDependencyGraph(int arcs, int vcs) : arcs_(arcs), vcs_(vcs), adj_(static_cast<size_t>(arcs) * vcs) {}

  int node_count() const { return static_cast<int>(adj_.size()); }
  int vcs() const { return vcs_; }
  int node(Channel c) const { return c.arc * vcs_ + c.vc; }
  Channel channel(int node) const { return {node / vcs_, node % vcs_}; }

  void add_edge(Channel from, Channel to) { adj_[node(from)].push_back(node(to)); }
  // Sorts and deduplicates adjacency lists.
  void finalize();
  const std::vector<int>& successors(int node) const { return adj_[node]; }
  std::int64_t edge_count() const;
  // Channels that appear in at least one dependency.
  int used_channels() const;

 private:
  int arcs_;
  int vcs_;
  std::vector<std::vector<int>> adj_;
};

// Every dependency any packet can create: all (source, destination) pairs,
// all initial states, all candidates at every reachable switch.
ChannelDependencyGraph build_cdg(const RoutingAlgorithm& routing);

// A directed cycle as a channel sequence (first channel not repeated), or
// nullopt when the graph is acyclic.
std::optional<std::vector<Channel>> find_cycle(const ChannelDependencyGraph& g);
inline bool has_cycle(const ChannelDependencyGraph& g) { return find_cycle(g).has_value(); }

// Edge list: "src dst vc -> src dst vc" per line, one line per dependency.
void write_cdg(std::ostream& os, const ChannelDependencyGraph& g, const Topology& topo);

// Deadlock-freedom argument for an adaptive routing with an escape
// sub-network: the escape dependencies are acyclic and every reachable
// routing state offers an escape candidate.
struct EscapeReport {
  bool escape_acyclic = false;
  bool escape_always_available = false;
  bool full_cdg_acyclic = false;  // informative; adaptive routings are usually cyclic
  std::int64_t states_checked = 0;
  std::vector<Channel> escape_cycle;   // witness when escape_acyclic is false
  std::vector<Channel> full_cycle;     // witness when full_cdg_acyclic is false
  bool deadlock_free() const { return full_cdg_acyclic || (escape_acyclic && escape_always_available); }
};

EscapeReport verify_escape(const TeraRouting& tera);

// Reachable routing states (switch, destination, state) and whether each
// can make progress. Throws invariant_violation when some reachable state has
// no candidate or a path exceeds max_hops().
struct ReachabilityReport {
  std::int64_t states = 0;
  int longest_path = 0;
};
ReachabilityReport check_reachability(const RoutingAlgorithm& routing);

}  // namespace fmnet
