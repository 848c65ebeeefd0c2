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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fmnet/ordering.hpp"
#include "fmnet/rng.hpp"
#include "fmnet/service.hpp"
#include "fmnet/topology.hpp"

namespace fmnet {

inline constexpr int kDefaultPenalty = 54;

enum class EntryClass : std::uint8_t { injection, transit };

// Per-packet routing memory carried from hop to hop.
struct RouteState {
  std::int16_t intermediate = -1;  // committed Valiant/UGAL intermediate switch
  std::uint8_t order = 0;          // O1TURN dimension order: 0 = XY, 1 = YX
  std::uint8_t last_dim = 0xff;    // dimension of the previous hop (HyperX)
  std::uint8_t nonminimal = 0;     // took a non-minimal first hop (Omni-WAR-style)

  bool operator==(const RouteState&) const = default;
  std::uint64_t key() const {
    return static_cast<std::uint64_t>(static_cast<std::uint16_t>(intermediate)) | (std::uint64_t{order} << 16) |
           (std::uint64_t{last_dim} << 24) | (std::uint64_t{nonminimal} << 32);
  }
};

struct RoutingContext {
  SwitchId current = 0;
  SwitchId destination = 0;
  EntryClass entry = EntryClass::injection;
  // Flits queued toward each network port of `current`; empty means all zero.
  std::span<const int> occupancy;

  int occ(PortId p) const { return occupancy.empty() ? 0 : occupancy[p]; }
};

struct RoutingChoice {
  PortId port = -1;
  int vc = 0;
  int weight = 0;
  RouteState next;
};

// Decision function for one packet at one switch. Implementations are
// immutable after construction and safe to share across threads; all
// randomness comes from the caller's stream.
class RoutingAlgorithm {
 public:
  explicit RoutingAlgorithm(Topology topo) : topo_(std::move(topo)) {}
  virtual ~RoutingAlgorithm() = default;

  virtual std::string name() const = 0;
  virtual int vc_count() const = 0;
  // Upper bound on network hops of any packet.
  virtual int max_hops() const = 0;

  // State assigned when a packet is generated (e.g. a sampled intermediate).
  virtual RouteState initial_state(SwitchId src, SwitchId dst, Rng& rng) const;
  // Every state initial_state can return; used to build dependency graphs.
  virtual std::vector<RouteState> initial_states(SwitchId src, SwitchId dst) const;

  // Full candidate set with weights computed from ctx.occupancy. Requires
  // ctx.current != ctx.destination.
  virtual void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const = 0;

  // Chosen candidate. Default: minimum weight, ties uniformly at random.
  virtual RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const;

  // Whether a head blocked at its switch may be routed again on a later cycle.
  // False means the first decision at each switch is final.
  virtual bool reroutes_blocked_heads() const { return true; }

  const Topology& topology() const { return topo_; }

 protected:
  Topology topo_;
};

// Minimum-weight choice with uniform random tie-breaking (reservoir style).
class WeightedArgmin {
 public:
  void offer(const RoutingChoice& c, Rng& rng) {
    if (ties_ == 0 || c.weight < best_.weight) {
      best_ = c;
      ties_ = 1;
    } else if (c.weight == best_.weight) {
      ++ties_;
      if (uniform_below(rng, ties_) == 0) best_ = c;
    }
  }
  bool empty() const { return ties_ == 0; }
  const RoutingChoice& best() const { return best_; }

 private:
  RoutingChoice best_;
  int ties_ = 0;
};

// Direct link to the destination, VC 0.
class MinRouting final : public RoutingAlgorithm {
 public:
  explicit MinRouting(const Topology& topo);
  std::string name() const override { return "MIN"; }
  int vc_count() const override { return 1; }
  int max_hops() const override { return 1; }
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;
};

// Through one intermediate sampled uniformly at generation: VC 0 then VC 1.
// The intermediate is drawn over all switches; drawing an endpoint means the
// direct link on VC 0. With `any_intermediate` false it is never an endpoint.
class ValiantRouting final : public RoutingAlgorithm {
 public:
  explicit ValiantRouting(const Topology& topo, bool any_intermediate = true);
  std::string name() const override { return "Valiant"; }
  int vc_count() const override { return 2; }
  int max_hops() const override { return 2; }
  RouteState initial_state(SwitchId src, SwitchId dst, Rng& rng) const override;
  std::vector<RouteState> initial_states(SwitchId src, SwitchId dst) const override;
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;
  bool any_intermediate() const { return any_; }

 private:
  bool any_;
};

// UGAL with local queue information: at the source, MIN is taken when
// occupancy(min port) <= 2 * occupancy(first Valiant hop); otherwise the packet
// commits to Valiant through its sampled intermediate.
class UgalRouting final : public RoutingAlgorithm {
 public:
  explicit UgalRouting(const Topology& topo);
  std::string name() const override { return "UGAL"; }
  int vc_count() const override { return 2; }
  int max_hops() const override { return 2; }
  RouteState initial_state(SwitchId src, SwitchId dst, Rng& rng) const override;
  std::vector<RouteState> initial_states(SwitchId src, SwitchId dst) const override;
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;
  // MIN-or-Valiant is decided once, when the head first requests an output.
  bool reroutes_blocked_heads() const override { return false; }
};

// Source-adaptive choice between the direct port and every non-minimal first
// hop (occupancy + q on non-minimal ones). Non-minimal packets switch to VC 1
// for their second hop.
class OmniWarRouting final : public RoutingAlgorithm {
 public:
  OmniWarRouting(const Topology& topo, int penalty);
  std::string name() const override { return "Omni-WAR-style"; }
  int vc_count() const override { return 2; }
  int max_hops() const override { return 2; }
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;
  int penalty() const { return q_; }

 private:
  int q_;
};

// Like OmniWarRouting but on a single VC. Deadlocks; kept as a negative control.
class UnrestrictedRouting final : public RoutingAlgorithm {
 public:
  UnrestrictedRouting(const Topology& topo, int penalty);
  std::string name() const override { return "unrestricted"; }
  int vc_count() const override { return 1; }
  int max_hops() const override { return 2; }
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;

 private:
  int q_;
};

// Link-ordering routing: at the source, the direct port plus every first hop m
// with label(cur, m) < label(m, dst); weights as in TERA; one VC.
// Oblivious selection ignores occupancy and draws one allowed path uniformly,
// once per packet; it is a diagnostic variant, not the default.
class OrderingRouting final : public RoutingAlgorithm {
 public:
  enum class Selection { adaptive, oblivious };
  OrderingRouting(const Topology& topo, ArcLabelling labelling, int penalty, std::string name = "sRINR",
                  Selection selection = Selection::adaptive);
  std::string name() const override { return name_; }
  bool reroutes_blocked_heads() const override { return selection_ == Selection::adaptive; }
  int vc_count() const override { return 1; }
  int max_hops() const override { return 2; }
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;
  const ArcLabelling& labelling() const { return lab_; }

 private:
  ArcLabelling lab_;
  int q_;
  std::string name_;
  Selection selection_;
  // allowed_first_[cur * n + dst]: first-hop ports allowed at the source.
  std::vector<std::vector<PortId>> allowed_first_;
};

// Topology-embedded routing. Candidates are the service port toward the
// destination plus, at the source, every main port, or, in transit, the
// direct port. A port that does not reach the destination costs its
// occupancy + q; ties are random. One VC.
class TeraRouting final : public RoutingAlgorithm {
 public:
  TeraRouting(const ServiceEmbedding& emb, int penalty);
  std::string name() const override;
  int vc_count() const override { return 1; }
  int max_hops() const override { return max_hop_bound(emb_); }
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;

  const ServiceEmbedding& embedding() const { return emb_; }
  int penalty() const { return q_; }
  // Port sets of the algorithm's notation.
  std::vector<PortId> main_ports(SwitchId x) const { return main_ports_[x]; }
  std::vector<PortId> service_ports(SwitchId x, SwitchId y) const;
  PortId min_port(SwitchId x, SwitchId y) const { return topo_.port_to(x, y); }

 private:
  ServiceEmbedding emb_;
  int q_;
  std::vector<std::vector<PortId>> main_ports_;
};

// Service routing alone (strict dimension order / up-down), one VC. Used to
// check that the escape sub-network is acyclic.
class ServiceOnlyRouting final : public RoutingAlgorithm {
 public:
  explicit ServiceOnlyRouting(const ServiceEmbedding& emb);
  std::string name() const override { return "service-" + emb_.label(); }
  int vc_count() const override { return 1; }
  int max_hops() const override { return emb_.service_diameter(); }
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;

 private:
  ServiceEmbedding emb_;
};

// TERA applied per dimension of a HyperX whose dimensions are full-meshes.
// dor: dimensions in increasing order, one VC. o1turn: the source picks XY or
// YX (minimum TERA weight over both orders) and each order has its own VC.
class HyperXTeraRouting final : public RoutingAlgorithm {
 public:
  enum class Order { dor, o1turn };
  HyperXTeraRouting(const Topology& hyperx, Order order, int penalty, const ServiceSpec& dim_service);
  std::string name() const override { return order_ == Order::dor ? "DOR-TERA" : "O1TURN-TERA"; }
  int vc_count() const override { return order_ == Order::dor ? 1 : 2; }
  int max_hops() const override { return max_hops_; }
  void candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const override;
  RoutingChoice select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const override;
  Order order() const { return order_; }

 private:
  template <class Sink>
  void dimension_candidates(const RoutingContext& ctx, const RouteState& st, std::uint8_t order, Sink&& sink) const;

  Order order_;
  int q_;
  int max_hops_ = 0;
  std::vector<int> strides_;
  std::vector<ServiceEmbedding> dim_emb_;
};

// Builds a routing from its config string:
//   ordering(srinr) | ordering(file=<path>), either with select=adaptive|oblivious
//   ordering(srinr) | ordering(file=<path>)
//   tera(service=<kind>, q=<int>) | hyperx_tera(order=dor|o1turn, q=<int>[, service=<kind>])
// Throws config_error naming the routing field on any problem.
std::unique_ptr<RoutingAlgorithm> make_routing(const std::string& spec, const Topology& topo);

// Name/argument split of a "name(k=v, ...)" string; values may nest parentheses.
struct CallSpec {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;  // key empty for positional
  static CallSpec parse(const std::string& text);
  std::string get(const std::string& key, const std::string& fallback = "") const;
  bool has(const std::string& key) const;
};

}  // namespace fmnet
