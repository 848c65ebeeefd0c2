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

#include <string>
#include <vector>

#include "fmnet/topology.hpp"

namespace fmnet {

// Which embedded spanning topology carries the escape (service) paths.
struct ServiceSpec {
  enum class Kind { path, d_mesh, k_tree, hypercube, hyperx, custom };

  Kind kind = Kind::hyperx;
  std::vector<int> dims;  // d_mesh / hyperx radices, dims[0] varies fastest
  int k = 2;              // k_tree arity
  int auto_dims = 0;      // d_mesh(d=..)/hyperx(d=..): factor n into this many dims at embed time

  // Accepts: path, hypercube, k_tree(4), d_mesh(4,4), d_mesh(d=2),
  // hyperx(4,4,4), hyperx(d=2).
  static ServiceSpec parse(const std::string& text);
  std::string to_string() const;

  // Resolves auto_dims against a concrete switch count.
  ServiceSpec resolved(int n) const;
};

// Factor n into `d` factors as close to equal as possible, sorted ascending
// (largest dimension last). Throws invalid_size if n < 2 or d < 1.
std::vector<int> balanced_factorization(int n, int d);

// Partition of a complete graph's arcs into service and main arcs, together
// with the service topology's minimal deadlock-free routing (strict dimension
// order for meshes/hypercubes/HyperX, up/down for trees) stored as a
// next-hop table.
class ServiceEmbedding {
 public:
  static ServiceEmbedding embed(const Topology& base, const ServiceSpec& spec);

  // Arbitrary service arcs and next-hop table; used to inject faulty service
  // routings in tests. next_hop is row-major [current * n + destination].
  static ServiceEmbedding custom(const Topology& base, const std::vector<Arc>& service_arcs,
                                 std::vector<SwitchId> next_hop, std::string label);

  const Topology& base() const { return base_; }
  const ServiceSpec& spec() const { return spec_; }
  int switches() const { return base_.switches(); }

  bool is_service(SwitchId a, SwitchId b) const { return role_[static_cast<size_t>(a) * switches() + b] != 0; }
  bool is_service_arc(int arc_id) const { return arc_role_[arc_id] != 0; }
  const std::vector<uint8_t>& arc_roles() const { return arc_role_; }
  std::vector<Arc> service_arcs() const;
  std::vector<Arc> main_arcs() const;
  int service_arc_count() const { return service_arc_count_; }
  int service_degree(SwitchId s) const { return service_degree_[s]; }
  int main_degree(SwitchId s) const { return base_.degree(s) - service_degree_[s]; }

  // Next switch on the service route from cur toward dst; cur when cur == dst.
  SwitchId service_next(SwitchId cur, SwitchId dst) const { return next_[static_cast<size_t>(cur) * switches() + dst]; }
  // Hops along the service route.
  int service_distance(SwitchId a, SwitchId b) const { return dist_[static_cast<size_t>(a) * switches() + b]; }
  int service_diameter() const { return diameter_; }
  // True when the service arcs alone connect every switch (BFS).
  bool service_connected() const;

  const std::vector<int>& coords(SwitchId s) const { return coords_[s]; }
  std::string label() const { return label_; }

 private:
  ServiceEmbedding() = default;
  void finalize_routes();

  Topology base_ = Topology::complete_graph(2, 1);
  ServiceSpec spec_;
  std::string label_;
  std::vector<uint8_t> role_;      // n*n
  std::vector<uint8_t> arc_role_;  // per base arc id
  std::vector<int> service_degree_;
  std::vector<SwitchId> next_;
  std::vector<int> dist_;
  std::vector<std::vector<int>> coords_;
  int service_arc_count_ = 0;
  int diameter_ = 0;
};

// (average main degree) / (n - 1). Throws embedding_mismatch when the main
// topology is empty.
double main_degree_ratio(const ServiceEmbedding& emb);

// 1 + diameter of the service topology: no TERA packet takes more hops.
int max_hop_bound(const ServiceEmbedding& emb);

// {"switches":..,"servers_per_switch":..,"service":..,"arcs":[{"src","dst","role"}]}
nlohmann::json to_json(const Topology& topo);
nlohmann::json to_json(const ServiceEmbedding& emb);

}  // namespace fmnet
