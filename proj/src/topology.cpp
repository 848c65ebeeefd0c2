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

#include "fmnet/topology.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "fmnet/errors.hpp"

namespace fmnet {

Topology Topology::complete_graph(int n, int servers_per_switch) {
  if (n < 2) throw invalid_size("complete graph needs at least 2 switches, got " + std::to_string(n));
  if (servers_per_switch < 0) throw invalid_size("servers_per_switch must be non-negative");
  Topology t;
  t.n_ = n;
  t.servers_per_switch_ = servers_per_switch;
  t.neighbors_.resize(n);
  for (SwitchId s = 0; s < n; ++s) {
    t.neighbors_[s].reserve(n - 1);
    for (SwitchId d = 0; d < n; ++d)
      if (d != s) t.neighbors_[s].push_back(d);
  }
  t.finalize();
  return t;
}

Topology Topology::hyperx(const std::vector<int>& dims, int servers_per_switch) {
  if (dims.empty()) throw invalid_size("hyperx needs at least one dimension");
  int n = 1;
  for (int d : dims) {
    if (d < 2) throw invalid_size("hyperx dimensions must be >= 2");
    n *= d;
  }
  if (n < 2) throw invalid_size("hyperx needs at least 2 switches");
  Topology t;
  t.n_ = n;
  t.servers_per_switch_ = servers_per_switch;
  t.hyperx_dims_ = dims;
  t.neighbors_.resize(n);
  for (SwitchId s = 0; s < n; ++s) {
    int stride = 1;
    for (int dim : dims) {
      const int c = (s / stride) % dim;
      for (int v = 0; v < dim; ++v)
        if (v != c) t.neighbors_[s].push_back(s + (v - c) * stride);
      stride *= dim;
    }
  }
  t.finalize();
  return t;
}

void Topology::finalize() {
  port_table_.assign(static_cast<size_t>(n_) * n_, -1);
  arc_offset_.assign(n_ + 1, 0);
  arcs_.clear();
  max_degree_ = 0;
  for (SwitchId s = 0; s < n_; ++s) {
    arc_offset_[s] = static_cast<int>(arcs_.size());
    const auto& nb = neighbors_[s];
    max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
    for (PortId p = 0; p < static_cast<PortId>(nb.size()); ++p) {
      auto& slot = port_table_[static_cast<size_t>(s) * n_ + nb[p]];
      if (slot >= 0 || nb[p] == s) throw invariant_violation("duplicate or self port in topology");
      slot = static_cast<int16_t>(p);
      arcs_.push_back({s, nb[p]});
    }
  }
  arc_offset_[n_] = static_cast<int>(arcs_.size());
}

std::vector<int> Topology::hyperx_coords(SwitchId s) const {
  std::vector<int> c;
  for (int d : hyperx_dims_) {
    c.push_back(s % d);
    s /= d;
  }
  return c;
}

int Topology::hyperx_dim_of(SwitchId a, SwitchId b) const {
  const auto ca = hyperx_coords(a);
  const auto cb = hyperx_coords(b);
  int dim = -1;
  for (size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] != cb[i]) {
      if (dim >= 0) return -1;
      dim = static_cast<int>(i);
    }
  }
  return dim;
}

int Topology::diameter() const {
  int diam = 0;
  std::vector<int> dist(n_);
  for (SwitchId s = 0; s < n_; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<SwitchId> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      const SwitchId u = queue.front();
      queue.pop_front();
      for (SwitchId v : neighbors_[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (int d : dist) {
      if (d < 0) return -1;
      diam = std::max(diam, d);
    }
  }
  return diam;
}

std::string Topology::describe() const {
  std::ostringstream os;
  if (hyperx_dims_.empty()) {
    os << "FM_" << n_;
  } else {
    os << "HyperX(";
    for (size_t i = 0; i < hyperx_dims_.size(); ++i) os << (i ? "x" : "") << hyperx_dims_[i];
    os << ")";
  }
  os << " servers/switch=" << servers_per_switch_;
  return os.str();
}

}  // namespace fmnet
