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

#include "fmnet/routing.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "fmnet/errors.hpp"

namespace fmnet {

namespace {

void require_complete(const Topology& topo, const char* who) {
  if (!topo.is_complete()) throw embedding_mismatch(std::string(who) + " needs a full-mesh topology");
}

thread_local std::vector<RoutingChoice> g_scratch;

// Uniform switch other than a and b (a != b), or -1 when none exists.
SwitchId sample_other(int n, SwitchId a, SwitchId b, Rng& rng) {
  if (n < 3) return -1;
  int r = uniform_below(rng, n - 2);
  const SwitchId lo = std::min(a, b), hi = std::max(a, b);
  if (r >= lo) ++r;
  if (r >= hi) ++r;
  return r;
}

std::vector<RouteState> intermediate_states(int n, SwitchId src, SwitchId dst) {
  std::vector<RouteState> out;
  for (SwitchId m = 0; m < n; ++m) {
    if (m == src || m == dst) continue;
    RouteState st;
    st.intermediate = static_cast<std::int16_t>(m);
    out.push_back(st);
  }
  if (out.empty()) out.push_back(RouteState{});
  return out;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

// ---------------------------------------------------------------- base

RouteState RoutingAlgorithm::initial_state(SwitchId, SwitchId, Rng&) const { return RouteState{}; }

std::vector<RouteState> RoutingAlgorithm::initial_states(SwitchId, SwitchId) const { return {RouteState{}}; }

RoutingChoice RoutingAlgorithm::select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const {
  auto& cands = g_scratch;
  cands.clear();
  candidates(ctx, st, cands);
  if (cands.empty()) throw invariant_violation(name() + ": no routing candidate");
  WeightedArgmin pick;
  for (const auto& c : cands) pick.offer(c, rng);
  return pick.best();
}

// ---------------------------------------------------------------- MIN

MinRouting::MinRouting(const Topology& topo) : RoutingAlgorithm(topo) { require_complete(topo, "MIN"); }

void MinRouting::candidates(const RoutingContext& ctx, const RouteState&, std::vector<RoutingChoice>& out) const {
  const PortId p = topo_.port_to(ctx.current, ctx.destination);
  out.push_back({p, 0, ctx.occ(p), RouteState{}});
}

RoutingChoice MinRouting::select(const RoutingContext& ctx, const RouteState&, Rng&) const {
  const PortId p = topo_.port_to(ctx.current, ctx.destination);
  return {p, 0, ctx.occ(p), RouteState{}};
}

// ---------------------------------------------------------------- Valiant

ValiantRouting::ValiantRouting(const Topology& topo, bool any_intermediate)
    : RoutingAlgorithm(topo), any_(any_intermediate) {
  require_complete(topo, "Valiant");
}

RouteState ValiantRouting::initial_state(SwitchId src, SwitchId dst, Rng& rng) const {
  RouteState st;
  if (any_) {
    const SwitchId m = uniform_below(rng, topo_.switches());
    st.intermediate = static_cast<std::int16_t>(m == src || m == dst ? -1 : m);
  } else {
    st.intermediate = static_cast<std::int16_t>(sample_other(topo_.switches(), src, dst, rng));
  }
  return st;
}

std::vector<RouteState> ValiantRouting::initial_states(SwitchId src, SwitchId dst) const {
  auto out = intermediate_states(topo_.switches(), src, dst);
  if (any_ && out.front().intermediate >= 0) out.push_back(RouteState{});
  return out;
}

void ValiantRouting::candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const {
  Rng unused;
  out.push_back(select(ctx, st, unused));
}

RoutingChoice ValiantRouting::select(const RoutingContext& ctx, const RouteState& st, Rng&) const {
  if (st.intermediate < 0) {
    const PortId p = topo_.port_to(ctx.current, ctx.destination);
    return {p, 0, ctx.occ(p), st};
  }
  if (ctx.current == st.intermediate) {
    const PortId p = topo_.port_to(ctx.current, ctx.destination);
    return {p, 1, ctx.occ(p), st};
  }
  const PortId p = topo_.port_to(ctx.current, st.intermediate);
  return {p, 0, ctx.occ(p), st};
}

// ---------------------------------------------------------------- UGAL

UgalRouting::UgalRouting(const Topology& topo) : RoutingAlgorithm(topo) { require_complete(topo, "UGAL"); }

RouteState UgalRouting::initial_state(SwitchId src, SwitchId dst, Rng& rng) const {
  RouteState st;
  st.intermediate = static_cast<std::int16_t>(sample_other(topo_.switches(), src, dst, rng));
  return st;
}

std::vector<RouteState> UgalRouting::initial_states(SwitchId src, SwitchId dst) const {
  return intermediate_states(topo_.switches(), src, dst);
}

// At the source the intermediate is only a proposal; the chosen candidate's
// `next` records whether the packet committed to it (intermediate >= 0) or went
// minimally (intermediate = -1).
void UgalRouting::candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  if (ctx.entry == EntryClass::transit) {
    const int vc = ctx.current == st.intermediate ? 1 : 0;
    out.push_back({direct, vc, ctx.occ(direct), st});
    return;
  }
  RouteState minimal = st;
  minimal.intermediate = -1;
  out.push_back({direct, 0, ctx.occ(direct), minimal});
  if (st.intermediate >= 0) {
    const PortId p = topo_.port_to(ctx.current, st.intermediate);
    out.push_back({p, 0, 2 * ctx.occ(p), st});
  }
}

RoutingChoice UgalRouting::select(const RoutingContext& ctx, const RouteState& st, Rng&) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  if (ctx.entry == EntryClass::transit) {
    const int vc = ctx.current == st.intermediate ? 1 : 0;
    return {direct, vc, ctx.occ(direct), st};
  }
  RouteState minimal = st;
  minimal.intermediate = -1;
  RoutingChoice min_choice{direct, 0, ctx.occ(direct), minimal};
  if (st.intermediate < 0) return min_choice;
  const PortId p = topo_.port_to(ctx.current, st.intermediate);
  RoutingChoice vlb{p, 0, 2 * ctx.occ(p), st};
  return min_choice.weight <= vlb.weight ? min_choice : vlb;
}

// ---------------------------------------------------------------- Omni-WAR-style

OmniWarRouting::OmniWarRouting(const Topology& topo, int penalty) : RoutingAlgorithm(topo), q_(penalty) {
  require_complete(topo, "Omni-WAR-style");
}

void OmniWarRouting::candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  if (ctx.entry == EntryClass::transit) {
    out.push_back({direct, st.nonminimal ? 1 : 0, ctx.occ(direct), st});
    return;
  }
  RouteState nonmin = st;
  nonmin.nonminimal = 1;
  const int deg = topo_.degree(ctx.current);
  for (PortId p = 0; p < deg; ++p) {
    if (p == direct)
      out.push_back({p, 0, ctx.occ(p), st});
    else
      out.push_back({p, 0, ctx.occ(p) + q_, nonmin});
  }
}

RoutingChoice OmniWarRouting::select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  if (ctx.entry == EntryClass::transit) return {direct, st.nonminimal ? 1 : 0, ctx.occ(direct), st};
  RouteState nonmin = st;
  nonmin.nonminimal = 1;
  WeightedArgmin pick;
  const int deg = topo_.degree(ctx.current);
  for (PortId p = 0; p < deg; ++p) {
    if (p == direct)
      pick.offer({p, 0, ctx.occ(p), st}, rng);
    else
      pick.offer({p, 0, ctx.occ(p) + q_, nonmin}, rng);
  }
  return pick.best();
}

// ---------------------------------------------------------------- unrestricted

UnrestrictedRouting::UnrestrictedRouting(const Topology& topo, int penalty) : RoutingAlgorithm(topo), q_(penalty) {
  require_complete(topo, "unrestricted");
}

void UnrestrictedRouting::candidates(const RoutingContext& ctx, const RouteState& st,
                                     std::vector<RoutingChoice>& out) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  if (ctx.entry == EntryClass::transit) {
    out.push_back({direct, 0, ctx.occ(direct), st});
    return;
  }
  const int deg = topo_.degree(ctx.current);
  for (PortId p = 0; p < deg; ++p) out.push_back({p, 0, ctx.occ(p) + (p == direct ? 0 : q_), st});
}

RoutingChoice UnrestrictedRouting::select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  if (ctx.entry == EntryClass::transit) return {direct, 0, ctx.occ(direct), st};
  WeightedArgmin pick;
  const int deg = topo_.degree(ctx.current);
  for (PortId p = 0; p < deg; ++p) pick.offer({p, 0, ctx.occ(p) + (p == direct ? 0 : q_), st}, rng);
  return pick.best();
}

// ---------------------------------------------------------------- ordering

OrderingRouting::OrderingRouting(const Topology& topo, ArcLabelling labelling, int penalty, std::string name,
                                 Selection selection)
    : RoutingAlgorithm(topo), lab_(std::move(labelling)), q_(penalty), name_(std::move(name)), selection_(selection) {
  require_complete(topo, "ordering routing");
  const int n = topo.switches();
  if (lab_.n() != n)
    throw embedding_mismatch("labelling covers " + std::to_string(lab_.n()) + " switches, topology has " +
                             std::to_string(n));
  allowed_first_.resize(static_cast<size_t>(n) * n);
  for (SwitchId s = 0; s < n; ++s)
    for (SwitchId d = 0; d < n; ++d) {
      if (s == d) continue;
      auto& ports = allowed_first_[static_cast<size_t>(s) * n + d];
      for (SwitchId m = 0; m < n; ++m)
        if (allowed_2path(lab_, s, m, d)) ports.push_back(topo.port_to(s, m));
    }
}

void OrderingRouting::candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  out.push_back({direct, 0, ctx.occ(direct), st});
  if (ctx.entry == EntryClass::transit) return;
  for (PortId p : allowed_first_[static_cast<size_t>(ctx.current) * topo_.switches() + ctx.destination])
    out.push_back({p, 0, ctx.occ(p) + q_, st});
}

RoutingChoice OrderingRouting::select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const {
  const PortId direct = topo_.port_to(ctx.current, ctx.destination);
  if (ctx.entry == EntryClass::transit) return {direct, 0, ctx.occ(direct), st};
  const auto& first = allowed_first_[static_cast<size_t>(ctx.current) * topo_.switches() + ctx.destination];
  if (selection_ == Selection::oblivious) {
    const int k = uniform_below(rng, static_cast<int>(first.size()) + 1);
    const PortId p = k == 0 ? direct : first[k - 1];
    return {p, 0, ctx.occ(p) + (p == direct ? 0 : q_), st};
  }
  WeightedArgmin pick;
  pick.offer({direct, 0, ctx.occ(direct), st}, rng);
  for (PortId p : first)
    pick.offer({p, 0, ctx.occ(p) + q_, st}, rng);
  return pick.best();
}

// ---------------------------------------------------------------- TERA

TeraRouting::TeraRouting(const ServiceEmbedding& emb, int penalty)
    : RoutingAlgorithm(emb.base()), emb_(emb), q_(penalty) {
  if (penalty < 0) throw std::invalid_argument("TERA penalty must be non-negative");
  const int n = topo_.switches();
  main_ports_.resize(n);
  for (SwitchId s = 0; s < n; ++s)
    for (PortId p = 0; p < topo_.degree(s); ++p)
      if (!emb_.is_service(s, topo_.neighbor(s, p))) main_ports_[s].push_back(p);
}

std::string TeraRouting::name() const {
  const auto& sp = emb_.spec();
  switch (sp.kind) {
    case ServiceSpec::Kind::hyperx: return "TERA-HX" + std::to_string(sp.dims.size());
    case ServiceSpec::Kind::hypercube: return "TERA-HC";
    case ServiceSpec::Kind::path: return "TERA-PATH";
    case ServiceSpec::Kind::k_tree: return "TERA-" + std::to_string(sp.k) + "TREE";
    case ServiceSpec::Kind::d_mesh: return "TERA-" + std::to_string(sp.dims.size()) + "DMESH";
    case ServiceSpec::Kind::custom: return "TERA-" + emb_.label();
  }
  return "TERA";
}

std::vector<PortId> TeraRouting::service_ports(SwitchId x, SwitchId y) const {
  if (x == y) return {};
  return {topo_.port_to(x, emb_.service_next(x, y))};
}

void TeraRouting::candidates(const RoutingContext& ctx, const RouteState& st, std::vector<RoutingChoice>& out) const {
  const SwitchId cur = ctx.current, dst = ctx.destination;
  const PortId serv = topo_.port_to(cur, emb_.service_next(cur, dst));
  const PortId direct = topo_.port_to(cur, dst);
  auto weight = [&](PortId p) { return ctx.occ(p) + (p == direct ? 0 : q_); };
  out.push_back({serv, 0, weight(serv), st});
  if (ctx.entry == EntryClass::injection) {
    for (PortId p : main_ports_[cur]) out.push_back({p, 0, weight(p), st});
  } else if (direct != serv) {
    out.push_back({direct, 0, weight(direct), st});
  }
}

RoutingChoice TeraRouting::select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const {
  const SwitchId cur = ctx.current, dst = ctx.destination;
  const PortId serv = topo_.port_to(cur, emb_.service_next(cur, dst));
  const PortId direct = topo_.port_to(cur, dst);
  auto weight = [&](PortId p) { return ctx.occ(p) + (p == direct ? 0 : q_); };
  WeightedArgmin pick;
  pick.offer({serv, 0, weight(serv), st}, rng);
  if (ctx.entry == EntryClass::injection) {
    for (PortId p : main_ports_[cur]) pick.offer({p, 0, weight(p), st}, rng);
  } else if (direct != serv) {
    pick.offer({direct, 0, weight(direct), st}, rng);
  }
  return pick.best();
}

// ---------------------------------------------------------------- service only

ServiceOnlyRouting::ServiceOnlyRouting(const ServiceEmbedding& emb) : RoutingAlgorithm(emb.base()), emb_(emb) {}

void ServiceOnlyRouting::candidates(const RoutingContext& ctx, const RouteState& st,
                                    std::vector<RoutingChoice>& out) const {
  const PortId p = topo_.port_to(ctx.current, emb_.service_next(ctx.current, ctx.destination));
  out.push_back({p, 0, ctx.occ(p), st});
}

// ---------------------------------------------------------------- HyperX + TERA

HyperXTeraRouting::HyperXTeraRouting(const Topology& hyperx, Order order, int penalty, const ServiceSpec& dim_service)
    : RoutingAlgorithm(hyperx), order_(order), q_(penalty) {
  const auto& dims = hyperx.hyperx_dims();
  if (dims.empty()) throw embedding_mismatch("HyperX TERA needs a HyperX topology");
  if (order == Order::o1turn && dims.size() != 2) throw embedding_mismatch("O1TURN needs a 2-dimensional HyperX");
  if (dims.size() > 8) throw embedding_mismatch("HyperX TERA supports at most 8 dimensions");
  int stride = 1;
  for (int k : dims) {
    strides_.push_back(stride);
    stride *= k;
    dim_emb_.push_back(ServiceEmbedding::embed(Topology::complete_graph(k, 1), dim_service));
    max_hops_ += max_hop_bound(dim_emb_.back());
  }
}

template <class Sink>
void HyperXTeraRouting::dimension_candidates(const RoutingContext& ctx, const RouteState& st, std::uint8_t order,
                                             Sink&& sink) const {
  const int nd = static_cast<int>(strides_.size());
  const auto& dims = topo_.hyperx_dims();
  // First dimension (in this order) where current and destination differ.
  int dim = -1, a = 0, b = 0;
  for (int i = 0; i < nd; ++i) {
    const int k = order == 0 ? i : nd - 1 - i;
    const int ca = (ctx.current / strides_[k]) % dims[k];
    const int cb = (ctx.destination / strides_[k]) % dims[k];
    if (ca != cb) {
      dim = k;
      a = ca;
      b = cb;
      break;
    }
  }
  if (dim < 0) return;
  const ServiceEmbedding& emb = dim_emb_[dim];
  const int vc = order_ == Order::dor ? 0 : order;
  RouteState next = st;
  next.order = order;
  next.last_dim = static_cast<std::uint8_t>(dim);
  const SwitchId base = ctx.current - a * strides_[dim];
  auto offer = [&](int v) {
    const PortId p = topo_.port_to(ctx.current, base + v * strides_[dim]);
    sink(RoutingChoice{p, vc, ctx.occ(p) + (v == b ? 0 : q_), next});
  };
  const int serv = emb.service_next(a, b);
  offer(serv);
  const bool entering = st.last_dim != dim;
  if (entering) {
    for (int v = 0; v < dims[dim]; ++v)
      if (v != a && !emb.is_service(a, v)) offer(v);
  } else if (serv != b) {
    offer(b);
  }
}

void HyperXTeraRouting::candidates(const RoutingContext& ctx, const RouteState& st,
                                   std::vector<RoutingChoice>& out) const {
  auto sink = [&](const RoutingChoice& c) { out.push_back(c); };
  if (order_ == Order::o1turn && ctx.entry == EntryClass::injection) {
    dimension_candidates(ctx, st, 0, sink);
    dimension_candidates(ctx, st, 1, sink);
  } else {
    dimension_candidates(ctx, st, order_ == Order::dor ? 0 : st.order, sink);
  }
}

RoutingChoice HyperXTeraRouting::select(const RoutingContext& ctx, const RouteState& st, Rng& rng) const {
  WeightedArgmin pick;
  auto sink = [&](const RoutingChoice& c) { pick.offer(c, rng); };
  if (order_ == Order::o1turn && ctx.entry == EntryClass::injection) {
    dimension_candidates(ctx, st, 0, sink);
    dimension_candidates(ctx, st, 1, sink);
  } else {
    dimension_candidates(ctx, st, order_ == Order::dor ? 0 : st.order, sink);
  }
  if (pick.empty()) throw invariant_violation(name() + ": no routing candidate");
  return pick.best();
}

// ---------------------------------------------------------------- spec parsing

CallSpec CallSpec::parse(const std::string& text) {
  CallSpec cs;
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos) {
    cs.name = t;
    return cs;
  }
  if (t.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
  cs.name = trim(t.substr(0, open));
  const std::string body = t.substr(open + 1, t.size() - open - 2);
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    const std::string item = trim(cur);
    cur.clear();
    if (item.empty()) return;
    const auto eq = item.find('=');
    const auto paren = item.find('(');
    if (eq != std::string::npos && (paren == std::string::npos || eq < paren))
      cs.args.push_back({trim(item.substr(0, eq)), trim(item.substr(eq + 1))});
    else
      cs.args.push_back({"", item});
  };
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
    if (c == ',' && depth == 0)
      flush();
    else
      cur += c;
  }
  if (depth != 0) throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
  flush();
  return cs;
}

std::string CallSpec::get(const std::string& key, const std::string& fallback) const {
  for (const auto& [k, v] : args)
    if (k == key) return v;
  return fallback;
}

bool CallSpec::has(const std::string& key) const {
  return std::any_of(args.begin(), args.end(), [&](const auto& kv) { return kv.first == key; });
}

namespace {

int parse_penalty(const CallSpec& cs) {
  const std::string v = cs.get("q", std::to_string(kDefaultPenalty));
  size_t used = 0;
  int q = 0;
  try {
    q = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || q < 0) throw config_error("routing", "penalty q must be a non-negative integer, got '" + v + "'");
  return q;
}

}  // namespace

std::unique_ptr<RoutingAlgorithm> make_routing(const std::string& spec, const Topology& topo) {
  CallSpec cs;
  try {
    cs = CallSpec::parse(spec);
  } catch (const std::invalid_argument& e) {
    throw config_error("routing", e.what());
  }
  std::string name = cs.name;
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  try {
    if (name == "min") return std::make_unique<MinRouting>(topo);
    if (name == "valiant") {
      const std::string which = cs.get("intermediate", "any");
      if (which != "other" && which != "any") throw config_error("routing", "intermediate must be any or other");
      return std::make_unique<ValiantRouting>(topo, which == "any");
    }
    if (name == "ugal") return std::make_unique<UgalRouting>(topo);
    if (name == "omniwar") return std::make_unique<OmniWarRouting>(topo, parse_penalty(cs));
    if (name == "unrestricted") return std::make_unique<UnrestrictedRouting>(topo, parse_penalty(cs));
    if (name == "ordering" || name == "srinr") {
      const std::string file = cs.get("file");
      const std::string sel = cs.get("select", "adaptive");
      if (sel != "adaptive" && sel != "oblivious") throw config_error("routing", "select must be adaptive or oblivious");
      const auto selection =
          sel == "oblivious" ? OrderingRouting::Selection::oblivious : OrderingRouting::Selection::adaptive;
      const std::string suffix = sel == "oblivious" ? "-oblivious" : "";
      if (file.empty())
        return std::make_unique<OrderingRouting>(topo, ArcLabelling::srinr(topo.switches()), parse_penalty(cs),
                                                 "sRINR" + suffix, selection);
      std::ifstream in(file);
      if (!in) throw config_error("routing", "cannot open labelling file '" + file + "'");
      return std::make_unique<OrderingRouting>(topo, read_labelling(in), parse_penalty(cs), "ordering" + suffix,
                                               selection);
    }
    if (name == "tera") {
      const auto service = ServiceSpec::parse(cs.get("service", "hyperx(d=3)"));
      return std::make_unique<TeraRouting>(ServiceEmbedding::embed(topo, service), parse_penalty(cs));
    }
    if (name == "service") {
      const auto service = ServiceSpec::parse(cs.get("service", "hyperx(d=3)"));
      return std::make_unique<ServiceOnlyRouting>(ServiceEmbedding::embed(topo, service));
    }
    if (name == "hyperx_tera") {
      const std::string order = cs.get("order", "dor");
      if (order != "dor" && order != "o1turn") throw config_error("routing", "order must be dor or o1turn");
      const auto service = ServiceSpec::parse(cs.get("service", "hypercube"));
      return std::make_unique<HyperXTeraRouting>(
          topo, order == "dor" ? HyperXTeraRouting::Order::dor : HyperXTeraRouting::Order::o1turn, parse_penalty(cs),
          service);
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error("routing", spec + ": " + e.what());
  }
  throw config_error("routing", "unknown routing '" + cs.name + "'");
}

}  // namespace fmnet
