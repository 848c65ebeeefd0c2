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

#include "fmnet/deadlock.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

#include "fmnet/errors.hpp"

namespace fmnet {

void ChannelDependencyGraph::finalize() {
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
}

std::int64_t ChannelDependencyGraph::edge_count() const {
  std::int64_t e = 0;
  for (const auto& a : adj_) e += static_cast<std::int64_t>(a.size());
  return e;
}

int ChannelDependencyGraph::used_channels() const {
  std::vector<char> used(adj_.size(), 0);
  for (size_t u = 0; u < adj_.size(); ++u) {
    if (!adj_[u].empty()) used[u] = 1;
    for (int v : adj_[u]) used[v] = 1;
  }
  return static_cast<int>(std::count(used.begin(), used.end(), 1));
}

namespace {

struct Visit {
  SwitchId cur;
  SwitchId dst;
  RouteState st;
  int in_node;  // -1 at the source
  int hops;
};

struct VisitKey {
  std::uint64_t a, b;
  bool operator==(const VisitKey&) const = default;
};

struct VisitKeyHash {
  size_t operator()(const VisitKey& k) const { return std::hash<std::uint64_t>()(k.a * 0x9E3779B97F4A7C15ULL ^ k.b); }
};

// Walks every routing state reachable from every (source, destination) pair
// and every initial state. `on_state(visit, candidates)` sees each state once.
template <class OnState>
void explore(const RoutingAlgorithm& r, OnState&& on_state) {
  const Topology& topo = r.topology();
  const int n = topo.switches();
  const int vcs = r.vc_count();
  std::unordered_set<VisitKey, VisitKeyHash> seen;
  std::vector<Visit> stack;
  std::vector<RoutingChoice> cands;
  for (SwitchId src = 0; src < n; ++src) {
    for (SwitchId dst = 0; dst < n; ++dst) {
      if (src == dst) continue;
      for (const RouteState& st0 : r.initial_states(src, dst)) stack.push_back({src, dst, st0, -1, 0});
      while (!stack.empty()) {
        const Visit v = stack.back();
        stack.pop_back();
        const VisitKey key{(static_cast<std::uint64_t>(v.in_node + 1) << 32) | (static_cast<std::uint64_t>(v.cur) << 16) |
                               static_cast<std::uint64_t>(v.dst),
                           v.st.key() | (static_cast<std::uint64_t>(v.hops) << 48)};
        if (!seen.insert(key).second) continue;
        cands.clear();
        RoutingContext ctx{v.cur, v.dst, v.in_node < 0 ? EntryClass::injection : EntryClass::transit, {}};
        r.candidates(ctx, v.st, cands);
        if (cands.empty())
          throw invariant_violation(r.name() + ": no candidate at switch " + std::to_string(v.cur) + " toward " +
                                    std::to_string(v.dst));
        on_state(v, cands);
        for (const auto& c : cands) {
          if (c.port < 0 || c.port >= topo.degree(v.cur) || c.vc < 0 || c.vc >= vcs)
            throw invariant_violation(r.name() + ": candidate outside the port/VC range");
          const SwitchId next = topo.neighbor(v.cur, c.port);
          if (next == v.dst) continue;
          if (v.hops + 1 >= r.max_hops())
            throw invariant_violation(r.name() + ": route exceeds the hop bound of " + std::to_string(r.max_hops()));
          const int node = topo.arc_id(v.cur, c.port) * vcs + c.vc;
          stack.push_back({next, v.dst, c.next, node, v.hops + 1});
        }
      }
    }
  }
}

}  // namespace

ChannelDependencyGraph build_cdg(const RoutingAlgorithm& routing) {
  const Topology& topo = routing.topology();
  const int vcs = routing.vc_count();
  ChannelDependencyGraph g(topo.arc_count(), vcs);
  explore(routing, [&](const Visit& v, const std::vector<RoutingChoice>& cands) {
    if (v.in_node < 0) return;
    const Channel from = g.channel(v.in_node);
    for (const auto& c : cands) g.add_edge(from, {topo.arc_id(v.cur, c.port), c.vc});
  });
  g.finalize();
  return g;
}

std::optional<std::vector<Channel>> find_cycle(const ChannelDependencyGraph& g) {
  const int n = g.node_count();
  std::vector<std::uint8_t> color(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> parent(n, -1);
  std::vector<std::pair<int, size_t>> stack;
  for (int root = 0; root < n; ++root) {
    if (color[root]) continue;
    stack.push_back({root, 0});
    color[root] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      const auto& succ = g.successors(u);
      if (i == succ.size()) {
        color[u] = 2;
        stack.pop_back();
        continue;
      }
      const int v = succ[i++];
      if (color[v] == 0) {
        parent[v] = u;
        color[v] = 1;
        stack.push_back({v, 0});
      } else if (color[v] == 1) {
        std::vector<Channel> cycle;
        for (int w = u; w != v; w = parent[w]) cycle.push_back(g.channel(w));
        cycle.push_back(g.channel(v));
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
    }
  }
  return std::nullopt;
}

void write_cdg(std::ostream& os, const ChannelDependencyGraph& g, const Topology& topo) {
  os << "# from_src from_dst from_vc -> to_src to_dst to_vc\n";
  for (int u = 0; u < g.node_count(); ++u) {
    const Channel cu = g.channel(u);
    const Arc& au = topo.arc(cu.arc);
    for (int v : g.successors(u)) {
      const Channel cv = g.channel(v);
      const Arc& av = topo.arc(cv.arc);
      os << au.src << ' ' << au.dst << ' ' << cu.vc << " -> " << av.src << ' ' << av.dst << ' ' << cv.vc << '\n';
    }
  }
}

EscapeReport verify_escape(const TeraRouting& tera) {
  EscapeReport rep;
  const ServiceEmbedding& emb = tera.embedding();
  const Topology& topo = tera.topology();

  const auto escape = build_cdg(ServiceOnlyRouting(emb));
  if (auto c = find_cycle(escape)) rep.escape_cycle = *c;
  rep.escape_acyclic = rep.escape_cycle.empty();

  bool always = true;
  explore(tera, [&](const Visit& v, const std::vector<RoutingChoice>& cands) {
    ++rep.states_checked;
    const SwitchId want = emb.service_next(v.cur, v.dst);
    const bool ok = std::any_of(cands.begin(), cands.end(), [&](const RoutingChoice& c) {
      return topo.neighbor(v.cur, c.port) == want && emb.is_service(v.cur, want) && c.vc == 0;
    });
    always = always && ok;
  });
  rep.escape_always_available = always;

  const auto full = build_cdg(tera);
  if (auto c = find_cycle(full)) rep.full_cycle = *c;
  rep.full_cdg_acyclic = rep.full_cycle.empty();
  return rep;
}

ReachabilityReport check_reachability(const RoutingAlgorithm& routing) {
  ReachabilityReport rep;
  explore(routing, [&](const Visit& v, const std::vector<RoutingChoice>&) {
    ++rep.states;
    rep.longest_path = std::max(rep.longest_path, v.hops + 1);
  });
  return rep;
}

}  // namespace fmnet
