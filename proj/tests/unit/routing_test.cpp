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

#include <map>

#include "fmnet/errors.hpp"
#include "fmnet/routing.hpp"
#include "fmnet/service.hpp"

namespace fmnet {
namespace {

RoutingContext at(SwitchId cur, SwitchId dst, EntryClass e, const std::vector<int>& occ) {
  return {cur, dst, e, std::span<const int>(occ)};
}

class TeraK16 : public ::testing::Test {
 protected:
  Topology topo = Topology::complete_graph(16, 1);
  TeraRouting tera{ServiceEmbedding::embed(topo, ServiceSpec::parse("hypercube")), kDefaultPenalty};
  std::vector<int> occ = std::vector<int>(15, 0);
  Rng rng = make_rng(7, Stream::routing);
};

TEST_F(TeraK16, WeightLaw) {
  // 0 -> 3 is not a hypercube edge, so the direct port is a main port.
  const auto& emb = tera.embedding();
  ASSERT_FALSE(emb.is_service(0, 3));
  occ[topo.port_to(0, 5)] = 17;
  std::vector<RoutingChoice> c;
  tera.candidates(at(0, 3, EntryClass::injection, occ), {}, c);
  EXPECT_EQ(static_cast<int>(c.size()), 1 + emb.main_degree(0));
  for (const auto& ch : c) {
    const SwitchId via = topo.neighbor(0, ch.port);
    const int want = occ[ch.port] + (via == 3 ? 0 : kDefaultPenalty);
    EXPECT_EQ(ch.weight, want);
    EXPECT_EQ(ch.vc, 0);
  }
  EXPECT_EQ(c.front().port, topo.port_to(0, emb.service_next(0, 3)));
}

TEST_F(TeraK16, TransitOffersServiceAndDirect) {
  std::vector<RoutingChoice> c;
  tera.candidates(at(0, 3, EntryClass::transit, occ), {}, c);
  ASSERT_EQ(c.size(), 2u);
  c.clear();
  // 0 -> 1 is a service edge: service and direct coincide.
  tera.candidates(at(0, 1, EntryClass::transit, occ), {}, c);
  EXPECT_EQ(c.size(), 1u);
}

TEST_F(TeraK16, ZeroLoadTakesDirectLink) {
  for (SwitchId d = 1; d < 16; ++d) {
    const auto ch = tera.select(at(0, d, EntryClass::injection, occ), {}, rng);
    EXPECT_EQ(topo.neighbor(0, ch.port), d);
    EXPECT_EQ(ch.weight, 0);
  }
}

TEST_F(TeraK16, TiesSplitEvenly) {
  const PortId direct = topo.port_to(0, 3);
  const PortId detour = tera.main_ports(0).front() == direct ? tera.main_ports(0)[1] : tera.main_ports(0).front();
  std::fill(occ.begin(), occ.end(), 1000);
  occ[direct] = kDefaultPenalty;
  occ[detour] = 0;
  int hits = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) hits += tera.select(at(0, 3, EntryClass::injection, occ), {}, rng).port == direct;
  EXPECT_NEAR(static_cast<double>(hits) / trials, 0.5, 0.02);
}

TEST_F(TeraK16, HopBound) { EXPECT_EQ(tera.max_hops(), 1 + 4); }

TEST(Min, AlwaysDirect) {
  const Topology t = Topology::complete_graph(6, 1);
  const auto r = make_routing("min", t);
  Rng rng = make_rng(1, Stream::routing);
  const std::vector<int> occ(5, 9);
  const auto c = r->select(at(2, 4, EntryClass::injection, occ), {}, rng);
  EXPECT_EQ(t.neighbor(2, c.port), 4);
  EXPECT_EQ(r->vc_count(), 1);
  EXPECT_EQ(r->max_hops(), 1);
  EXPECT_THROW(make_routing("min", Topology::hyperx({4, 4}, 1)), config_error);
}

TEST(Ugal, LocalQueueRule) {
  const Topology t = Topology::complete_graph(8, 1);
  const UgalRouting u(t);
  Rng rng = make_rng(1, Stream::routing);
  RouteState st;
  st.intermediate = 5;
  std::vector<int> occ(7, 0);
  occ[t.port_to(0, 3)] = 10;
  occ[t.port_to(0, 5)] = 5;
  auto c = u.select(at(0, 3, EntryClass::injection, occ), st, rng);
  EXPECT_EQ(t.neighbor(0, c.port), 3);  // 10 <= 2 * 5
  EXPECT_EQ(c.next.intermediate, -1);
  occ[t.port_to(0, 3)] = 11;
  c = u.select(at(0, 3, EntryClass::injection, occ), st, rng);
  EXPECT_EQ(t.neighbor(0, c.port), 5);
  EXPECT_EQ(c.vc, 0);
  EXPECT_EQ(c.next.intermediate, 5);
  // Second hop leaves the intermediate on VC 1.
  c = u.select(at(5, 3, EntryClass::transit, occ), c.next, rng);
  EXPECT_EQ(t.neighbor(5, c.port), 3);
  EXPECT_EQ(c.vc, 1);
  EXPECT_FALSE(u.reroutes_blocked_heads());
}

TEST(Valiant, IntermediateDraws) {
  const Topology t = Topology::complete_graph(8, 1);
  const ValiantRouting any(t, true), other(t, false);
  Rng rng = make_rng(3, Stream::routing);
  std::map<int, int> seen_any, seen_other;
  const int trials = 80000;
  for (int k = 0; k < trials; ++k) {
    ++seen_any[any.initial_state(1, 6, rng).intermediate];
    ++seen_other[other.initial_state(1, 6, rng).intermediate];
  }
  // any: endpoints collapse into the direct path (-1), 2 of 8 draws.
  EXPECT_NEAR(seen_any[-1] / static_cast<double>(trials), 2.0 / 8, 0.01);
  EXPECT_EQ(seen_any.count(1) + seen_any.count(6), 0u);
  EXPECT_EQ(seen_other.count(-1) + seen_other.count(1) + seen_other.count(6), 0u);
  EXPECT_EQ(seen_other.size(), 6u);
  for (const auto& [m, c] : seen_other) EXPECT_NEAR(c / static_cast<double>(trials), 1.0 / 6, 0.01) << m;
  EXPECT_EQ(any.initial_states(1, 6).size(), 7u);
  EXPECT_EQ(other.initial_states(1, 6).size(), 6u);
}

TEST(Valiant, VcPerLeg) {
  const Topology t = Topology::complete_graph(8, 1);
  const ValiantRouting v(t);
  Rng rng = make_rng(1, Stream::routing);
  const std::vector<int> occ(7, 0);
  RouteState st;
  st.intermediate = 4;
  auto c = v.select(at(0, 2, EntryClass::injection, occ), st, rng);
  EXPECT_EQ(t.neighbor(0, c.port), 4);
  EXPECT_EQ(c.vc, 0);
  c = v.select(at(4, 2, EntryClass::transit, occ), st, rng);
  EXPECT_EQ(t.neighbor(4, c.port), 2);
  EXPECT_EQ(c.vc, 1);
  c = v.select(at(0, 2, EntryClass::injection, occ), RouteState{}, rng);
  EXPECT_EQ(t.neighbor(0, c.port), 2);
  EXPECT_EQ(c.vc, 0);
}

TEST(Ordering, CandidatesAreAllowedPaths) {
  const Topology t = Topology::complete_graph(10, 1);
  const OrderingRouting r(t, ArcLabelling::srinr(10), kDefaultPenalty);
  const std::vector<int> occ(9, 0);
  for (SwitchId d = 1; d < 10; ++d) {
    std::vector<RoutingChoice> c;
    r.candidates(at(0, d, EntryClass::injection, occ), {}, c);
    EXPECT_EQ(c.size(), 1 + intermediates(r.labelling(), 0, d).size());
    for (size_t k = 1; k < c.size(); ++k) {
      EXPECT_TRUE(allowed_2path(r.labelling(), 0, t.neighbor(0, c[k].port), d));
      EXPECT_EQ(c[k].weight, kDefaultPenalty);
    }
  }
}

TEST(Ordering, ObliviousDrawsUniformly) {
  const Topology t = Topology::complete_graph(8, 1);
  const OrderingRouting r(t, ArcLabelling::srinr(8), kDefaultPenalty, "x", OrderingRouting::Selection::oblivious);
  EXPECT_FALSE(r.reroutes_blocked_heads());
  Rng rng = make_rng(9, Stream::routing);
  std::vector<int> occ(7, 0);
  occ[t.port_to(0, 5)] = 500;  // ignored by oblivious selection
  const auto ms = intermediates(r.labelling(), 0, 5);
  std::map<SwitchId, int> hits;
  const int trials = 30000;
  for (int k = 0; k < trials; ++k) ++hits[t.neighbor(0, r.select(at(0, 5, EntryClass::injection, occ), {}, rng).port)];
  EXPECT_EQ(hits.size(), ms.size() + 1);
  for (const auto& [via, c] : hits) EXPECT_NEAR(c / static_cast<double>(trials), 1.0 / (ms.size() + 1), 0.015) << via;
}

TEST(OmniWar, NonMinimalMovesToVc1) {
  const Topology t = Topology::complete_graph(6, 1);
  const OmniWarRouting r(t, kDefaultPenalty);
  Rng rng = make_rng(1, Stream::routing);
  std::vector<int> occ(5, 0);
  occ[t.port_to(0, 4)] = 100;
  const auto c = r.select(at(0, 4, EntryClass::injection, occ), {}, rng);
  EXPECT_NE(t.neighbor(0, c.port), 4);
  EXPECT_EQ(c.next.nonminimal, 1);
  const auto c2 = r.select(at(t.neighbor(0, c.port), 4, EntryClass::transit, occ), c.next, rng);
  EXPECT_EQ(c2.vc, 1);
}

TEST(HyperXTera, DorAndO1turn) {
  const Topology hx = Topology::hyperx({4, 4}, 1);
  const auto dor = make_routing("hyperx_tera(order=dor)", hx);
  const auto o1 = make_routing("hyperx_tera(order=o1turn)", hx);
  EXPECT_EQ(dor->vc_count(), 1);
  EXPECT_EQ(o1->vc_count(), 2);
  EXPECT_EQ(dor->max_hops(), 2 * (1 + 2));
  Rng rng = make_rng(1, Stream::routing);
  const std::vector<int> occ(hx.max_degree(), 0);
  // (0,0) -> (2,3): DOR fixes x first.
  const SwitchId dst = 2 + 3 * 4;
  const auto c = dor->select(at(0, dst, EntryClass::injection, occ), {}, rng);
  EXPECT_EQ(hx.hyperx_dim_of(0, hx.neighbor(0, c.port)), 0);
}

TEST(Factory, Errors) {
  const Topology t = Topology::complete_graph(8, 1);
  EXPECT_THROW(make_routing("nope", t), config_error);
  EXPECT_THROW(make_routing("tera(q=-1)", t), config_error);
  EXPECT_THROW(make_routing("tera(service=hypercube", t), config_error);
  EXPECT_THROW(make_routing("valiant(intermediate=some)", t), config_error);
  EXPECT_EQ(make_routing("tera(service=hyperx(d=3))", Topology::complete_graph(64, 1))->name(), "TERA-HX3");
  EXPECT_EQ(make_routing("ordering(srinr, select=oblivious)", t)->name(), "sRINR-oblivious");
}

TEST(CallSpec, NestedArguments) {
  const auto cs = CallSpec::parse("tera(service=hyperx(4,4,4), q=10)");
  EXPECT_EQ(cs.name, "tera");
  EXPECT_EQ(cs.get("service"), "hyperx(4,4,4)");
  EXPECT_EQ(cs.get("q"), "10");
  EXPECT_FALSE(cs.has("order"));
}

}  // namespace
}  // namespace fmnet
