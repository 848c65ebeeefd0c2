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

#include "fmnet/engine.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "fmnet/errors.hpp"

namespace fmnet {

void EngineParams::validate() const {
  auto need = [](bool ok, const char* field, const char* what) {
    if (!ok) throw config_error(std::string("engine.") + field, what);
  };
  need(packet_flits >= 1, "packet_flits", "must be positive");
  need(input_buffer_flits >= packet_flits, "input_buffer_flits", "must hold at least one packet");
  need(output_buffer_flits >= packet_flits, "output_buffer_flits", "must hold at least one packet");
  need(link_latency >= 1, "link_latency", "must be at least 1");
  need(credit_latency >= 1, "credit_latency", "must be at least 1");
  need(router_delay >= 0, "router_delay", "must be non-negative");
  need(speedup >= 1, "speedup", "must be at least 1");
  need(deadlock_window >= 1, "deadlock_window", "must be positive");
}

namespace {

struct QueueEntry {
  std::int64_t created;
  ServerId dst;  // -1: draw from the Bernoulli pattern at injection
  int tag;
};

struct Packet {
  std::int64_t id = 0;
  ServerId src = 0, dst = 0;
  SwitchId dst_switch = 0;
  int tag = 0;
  int hops = 0;
  std::int64_t created = 0, injected = 0;
  std::int64_t head_ready = 0;
  std::int64_t route_stamp = -1;
  RoutingChoice route;
  RouteState st;
};

struct Buffer {
  int head = 0;
  int count = 0;       // packets
  int flits = 0;       // flits present
  int sent_front = 0;  // flits of the front packet already forwarded
};

enum class EventKind : std::uint8_t { flit, credit, injection_credit, deliver };

struct Event {
  EventKind kind;
  int index;
};

}  // namespace

struct Simulator::Impl {
  const Topology& topo;
  int n = 0, spw = 0, V = 1, F = 16;
  int ring_in = 0, ring_out = 0;
  std::vector<int> deg, nports, in_base, out_base;
  std::vector<int> port_switch;  // global port -> switch (same numbering for inputs and outputs)
  std::vector<int> in_conn;      // input port -> output VC index, -1 idle
  std::vector<std::uint8_t> in_conn_vc, in_rr;
  std::vector<std::uint8_t> out_conn, out_rr;
  std::vector<int> out_link_vc;
  std::vector<int> occ;
  std::vector<int> down_in, up_out, out_arc;
  std::vector<Buffer> ib, ob;
  std::vector<int> iring, oring;
  std::vector<int> credits, out_reserved;
  std::vector<int> in_pkts, out_pkts;
  // requests of the current allocation round, per output port
  std::vector<int> req_n, req_gi;
  std::vector<std::uint8_t> req_v;
  std::vector<int> touched;
  // servers
  std::vector<std::deque<QueueEntry>> srcq;
  std::vector<int> inj_pkt, inj_sent, inj_credits;
  std::vector<std::int64_t> next_gen;
  const TrafficPattern* pattern = nullptr;
  double load = 0.0;
  // packets
  std::vector<Packet> pool;
  std::vector<int> free_list;
  std::vector<std::vector<SwitchId>> paths;
  bool tracing = false;
  std::int64_t next_id = 0;
  // events
  std::vector<std::vector<Event>> wheel;
  Rng rng_traffic, rng_alloc, rng_route;
  int max_hops = 0;

  explicit Impl(const Topology& t) : topo(t) {}

  int alloc_packet() {
    if (!free_list.empty()) {
      const int id = free_list.back();
      free_list.pop_back();
      return id;
    }
    pool.emplace_back();
    if (tracing) paths.emplace_back();
    return static_cast<int>(pool.size()) - 1;
  }

  void schedule(std::int64_t when, EventKind kind, int index) {
    wheel[static_cast<size_t>(when % static_cast<std::int64_t>(wheel.size()))].push_back({kind, index});
  }

  int in_ring_at(int ivc, int k) const { return iring[static_cast<size_t>(ivc) * ring_in + (ib[ivc].head + k) % ring_in]; }
  int out_ring_at(int ovc, int k) const {
    return oring[static_cast<size_t>(ovc) * ring_out + (ob[ovc].head + k) % ring_out];
  }
  void in_push(int ivc, int pkt) {
    Buffer& b = ib[ivc];
    if (b.count >= ring_in) throw invariant_violation("input buffer holds more packets than its capacity");
    iring[static_cast<size_t>(ivc) * ring_in + (b.head + b.count) % ring_in] = pkt;
    ++b.count;
  }
  void out_push(int ovc, int pkt) {
    Buffer& b = ob[ovc];
    if (b.count >= ring_out) throw invariant_violation("output buffer holds more packets than its capacity");
    oring[static_cast<size_t>(ovc) * ring_out + (b.head + b.count) % ring_out] = pkt;
    ++b.count;
  }
  int available(const Buffer& b) const { return b.count == 1 ? b.flits : F - b.sent_front; }
};

Simulator::Simulator(const RoutingAlgorithm& routing, const EngineParams& params, std::uint64_t seed)
    : impl_(std::make_unique<Impl>(routing.topology())),
      routing_(routing),
      p_(params),
      reroute_(params.reroute_blocked && routing.reroutes_blocked_heads()) {
  p_.validate();
  Impl& m = *impl_;
  const Topology& topo = routing.topology();
  m.n = topo.switches();
  m.spw = topo.servers_per_switch();
  m.V = routing.vc_count();
  m.F = p_.packet_flits;
  m.ring_in = p_.input_buffer_flits / m.F;
  m.ring_out = p_.output_buffer_flits / m.F;
  m.max_hops = routing.max_hops();
  m.deg.resize(m.n);
  m.nports.resize(m.n);
  m.in_base.resize(m.n + 1);
  m.out_base.resize(m.n + 1);
  int total = 0;
  for (SwitchId s = 0; s < m.n; ++s) {
    m.deg[s] = topo.degree(s);
    m.nports[s] = m.deg[s] + m.spw;
    m.in_base[s] = m.out_base[s] = total;
    total += m.nports[s];
  }
  m.in_base[m.n] = m.out_base[m.n] = total;
  m.port_switch.resize(total);
  m.down_in.assign(total, -1);
  m.up_out.assign(total, -1);
  m.out_arc.assign(total, -1);
  for (SwitchId s = 0; s < m.n; ++s) {
    for (int p = 0; p < m.nports[s]; ++p) m.port_switch[m.in_base[s] + p] = s;
    for (PortId p = 0; p < m.deg[s]; ++p) {
      const SwitchId t = topo.neighbor(s, p);
      const int gi = m.in_base[t] + topo.port_to(t, s);
      m.down_in[m.out_base[s] + p] = gi;
      m.up_out[gi] = m.out_base[s] + p;
      m.out_arc[m.out_base[s] + p] = topo.arc_id(s, p);
    }
  }
  m.in_conn.assign(total, -1);
  m.in_conn_vc.assign(total, 0);
  m.in_rr.assign(total, 0);
  m.out_conn.assign(total, 0);
  m.out_rr.assign(total, 0);
  m.out_link_vc.assign(total, -1);
  m.occ.assign(total, 0);
  m.ib.assign(static_cast<size_t>(total) * m.V, Buffer{});
  m.ob.assign(static_cast<size_t>(total) * m.V, Buffer{});
  m.iring.assign(static_cast<size_t>(total) * m.V * m.ring_in, -1);
  m.oring.assign(static_cast<size_t>(total) * m.V * m.ring_out, -1);
  m.credits.assign(static_cast<size_t>(total) * m.V, p_.input_buffer_flits);
  m.out_reserved.assign(static_cast<size_t>(total) * m.V, 0);
  m.in_pkts.assign(m.n, 0);
  m.out_pkts.assign(m.n, 0);
  m.req_n.assign(total, 0);
  m.req_gi.assign(total, -1);
  m.req_v.assign(total, 0);
  const int servers = topo.servers();
  m.srcq.resize(servers);
  m.inj_pkt.assign(servers, -1);
  m.inj_sent.assign(servers, 0);
  m.inj_credits.assign(servers, p_.input_buffer_flits);
  m.wheel.resize(static_cast<size_t>(std::max(p_.link_latency, p_.credit_latency)) + 1);
  m.tracing = p_.trace;
  m.rng_traffic = make_rng(seed, Stream::traffic);
  m.rng_alloc = make_rng(seed, Stream::allocator);
  m.rng_route = make_rng(seed, Stream::routing);
}

Simulator::~Simulator() = default;

void Simulator::enqueue(ServerId src, ServerId dst, int tag) {
  Impl& m = *impl_;
  if (src < 0 || src >= static_cast<int>(m.srcq.size()) || dst < 0 || dst >= static_cast<int>(m.srcq.size()))
    throw std::invalid_argument("enqueue: server id out of range");
  m.srcq[src].push_back({now_, dst, tag});
  ++queued_;
}

void Simulator::set_bernoulli(const TrafficPattern* pattern, double load) {
  Impl& m = *impl_;
  if (load < 0.0 || load > 1.0) throw config_error("traffic.load", "offered load must lie in [0, 1]");
  m.pattern = pattern;
  m.load = load;
  m.next_gen.assign(m.srcq.size(), -1);
  const double prob = load / m.F;
  if (!pattern || prob <= 0.0) return;
  if (prob >= 1.0) {
    std::fill(m.next_gen.begin(), m.next_gen.end(), now_);
    return;
  }
  std::geometric_distribution<std::int64_t> gap(prob);
  for (auto& g : m.next_gen) g = now_ + gap(m.rng_traffic);
}

void Simulator::step() {
  Impl& m = *impl_;
  const Topology& topo = routing_.topology();
  const int V = m.V, F = m.F;
  const int L = p_.link_latency, LC = p_.credit_latency, RD = p_.router_delay;
  std::int64_t moved = 0;

  // (1) arrivals
  auto& slot = m.wheel[static_cast<size_t>(now_ % static_cast<std::int64_t>(m.wheel.size()))];
  for (const Event& ev : slot) {
    switch (ev.kind) {
      case EventKind::flit: {
        Buffer& b = m.ib[ev.index];
        if (++b.flits > p_.input_buffer_flits) throw invariant_violation("input buffer overflow");
        break;
      }
      case EventKind::credit:
        if (++m.credits[ev.index] > p_.input_buffer_flits) throw invariant_violation("credit counter overflow");
        break;
      case EventKind::injection_credit:
        if (++m.inj_credits[ev.index] > p_.input_buffer_flits) throw invariant_violation("credit counter overflow");
        break;
      case EventKind::deliver: {
        Packet& pk = m.pool[ev.index];
        ++delivered_;
        --in_network_;
        if (metrics_) metrics_->on_delivered(pk.created, now_, pk.hops);
        if (on_delivery_) {
          DeliveredPacket d{pk.id, pk.src, pk.dst, pk.created, pk.injected, now_, pk.hops, pk.tag, {}};
          if (m.tracing) d.path = m.paths[ev.index];
          on_delivery_(d);
        }
        m.free_list.push_back(ev.index);
        break;
      }
    }
  }
  slot.clear();

  // (2) generation and injection links
  const int servers = static_cast<int>(m.srcq.size());
  if (m.pattern && !m.next_gen.empty() && m.load > 0.0) {
    const double prob = m.load / F;
    std::geometric_distribution<std::int64_t> gap(std::min(prob, 1.0));
    for (ServerId s = 0; s < servers; ++s) {
      while (m.next_gen[s] >= 0 && m.next_gen[s] <= now_) {
        m.srcq[s].push_back({now_, -1, 0});
        ++queued_;
        m.next_gen[s] += prob >= 1.0 ? 1 : 1 + gap(m.rng_traffic);
      }
    }
  }
  for (ServerId s = 0; s < servers; ++s) {
    if (m.inj_pkt[s] < 0) {
      if (m.srcq[s].empty() || m.inj_credits[s] < F) continue;
      const QueueEntry e = m.srcq[s].front();
      m.srcq[s].pop_front();
      --queued_;
      const int id = m.alloc_packet();
      Packet& pk = m.pool[id];
      pk = Packet{};
      pk.id = m.next_id++;
      pk.src = s;
      pk.dst = e.dst >= 0 ? e.dst : m.pattern->destination(s, m.rng_traffic);
      pk.dst_switch = pk.dst / m.spw;
      pk.tag = e.tag;
      pk.created = e.created;
      pk.injected = now_;
      const SwitchId sw = s / m.spw;
      pk.st = routing_.initial_state(sw, pk.dst_switch, m.rng_route);
      pk.head_ready = now_ + L + RD;
      if (m.tracing) m.paths[id].assign(1, sw);
      const int gi = m.in_base[sw] + m.deg[sw] + (s - sw * m.spw);
      m.in_push(gi * V, id);
      ++m.in_pkts[sw];
      m.inj_credits[s] -= F;
      m.inj_pkt[s] = id;
      m.inj_sent[s] = 0;
      ++in_network_;
      ++injected_;
    }
    const SwitchId sw = s / m.spw;
    const int gi = m.in_base[sw] + m.deg[sw] + (s - sw * m.spw);
    m.schedule(now_ + L, EventKind::flit, gi * V);
    if (metrics_) metrics_->on_injected_flit(s, now_);
    ++moved;
    if (++m.inj_sent[s] == F) m.inj_pkt[s] = -1;
  }

  // (3) crossbar rounds
  for (int round = 0; round < p_.speedup; ++round) {
    for (SwitchId s = 0; s < m.n; ++s) {
      if (m.in_pkts[s] == 0) continue;
      const int deg = m.deg[s];
      const int ib0 = m.in_base[s], ob0 = m.out_base[s];
      const std::span<const int> occ(m.occ.data() + ob0, static_cast<size_t>(deg));
      m.touched.clear();
      for (int p = 0; p < m.nports[s]; ++p) {
        const int gi = ib0 + p;
        if (m.in_conn[gi] >= 0) continue;
        const int nv = p < deg ? V : 1;
        for (int k = 0; k < nv; ++k) {
          const int v = (m.in_rr[gi] + k) % nv;
          const int ivc = gi * V + v;
          if (m.ib[ivc].count == 0) continue;
          const int id = m.in_ring_at(ivc, 0);
          Packet& pk = m.pool[id];
          if (pk.head_ready > now_) continue;
          if (pk.dst_switch == s) {
            pk.route.port = deg + (pk.dst - s * m.spw);
            pk.route.vc = 0;
          } else if (pk.route_stamp < 0 || (reroute_ && pk.route_stamp != now_)) {
            RoutingContext ctx{s, pk.dst_switch, p < deg ? EntryClass::transit : EntryClass::injection, occ};
            pk.route = routing_.select(ctx, pk.st, m.rng_route);
            pk.route_stamp = now_;
          }
          const int go = ob0 + pk.route.port;
          if (m.out_conn[go]) continue;
          if (m.out_reserved[go * V + pk.route.vc] + F > p_.output_buffer_flits) continue;
          if (m.req_n[go]++ == 0) m.touched.push_back(go);
          if (m.req_n[go] == 1 || uniform_below(m.rng_alloc, m.req_n[go]) == 0) {
            m.req_gi[go] = gi;
            m.req_v[go] = static_cast<std::uint8_t>(v);
          }
          break;
        }
      }
      for (int go : m.touched) {
        m.req_n[go] = 0;
        const int gi = m.req_gi[go];
        const int v = m.req_v[go];
        const int ivc = gi * V + v;
        const int id = m.in_ring_at(ivc, 0);
        Packet& pk = m.pool[id];
        const int ovc = go * V + pk.route.vc;
        m.out_push(ovc, id);
        m.out_reserved[ovc] += F;
        m.occ[go] += F;
        ++m.out_pkts[s];
        m.in_conn[gi] = ovc;
        m.in_conn_vc[gi] = static_cast<std::uint8_t>(v);
        m.out_conn[go] = 1;
        pk.route_stamp = -1;
        const int nv = (gi - ib0) < deg ? V : 1;
        m.in_rr[gi] = static_cast<std::uint8_t>((v + 1) % nv);
        if (pk.route.port < deg) {
          if (++pk.hops > m.max_hops)
            throw invariant_violation(routing_.name() + ": packet " + std::to_string(pk.id) + " exceeded " +
                                      std::to_string(m.max_hops) + " hops");
          max_hops_seen_ = std::max(max_hops_seen_, pk.hops);
          pk.st = pk.route.next;
          if (m.tracing) m.paths[id].push_back(topo.neighbor(s, pk.route.port));
        }
      }
      // one flit per connection
      for (int p = 0; p < m.nports[s]; ++p) {
        const int gi = ib0 + p;
        const int ovc = m.in_conn[gi];
        if (ovc < 0) continue;
        const int v = m.in_conn_vc[gi];
        const int ivc = gi * V + v;
        Buffer& b = m.ib[ivc];
        if (m.available(b) <= 0) continue;
        --b.flits;
        ++b.sent_front;
        ++m.ob[ovc].flits;
        ++moved;
        if (m.up_out[gi] >= 0)
          m.schedule(now_ + LC, EventKind::credit, m.up_out[gi] * V + v);
        else
          m.schedule(now_ + LC, EventKind::injection_credit, s * m.spw + (p - deg));
        if (b.sent_front == F) {
          b.head = (b.head + 1) % m.ring_in;
          --b.count;
          b.sent_front = 0;
          --m.in_pkts[s];
          m.in_conn[gi] = -1;
          m.out_conn[ovc / V] = 0;
        }
      }
    }
  }

  // (4) output links
  for (SwitchId s = 0; s < m.n; ++s) {
    if (m.out_pkts[s] == 0) continue;
    const int deg = m.deg[s];
    const int ob0 = m.out_base[s];
    for (int p = 0; p < m.nports[s]; ++p) {
      const int go = ob0 + p;
      const bool network = p < deg;
      int v = m.out_link_vc[go];
      if (v < 0) {
        const int nv = network ? V : 1;
        for (int k = 0; k < nv; ++k) {
          const int c = (m.out_rr[go] + k) % nv;
          const int ovc = go * V + c;
          const Buffer& b = m.ob[ovc];
          if (b.count == 0 || m.available(b) <= 0) continue;
          if (network && m.credits[ovc] < F) continue;
          if (network) m.credits[ovc] -= F;
          v = c;
          m.out_link_vc[go] = c;
          m.out_rr[go] = static_cast<std::uint8_t>((c + 1) % nv);
          break;
        }
        if (v < 0) continue;
      }
      const int ovc = go * V + v;
      Buffer& b = m.ob[ovc];
      if (m.available(b) <= 0) continue;
      const int id = m.out_ring_at(ovc, 0);
      --b.flits;
      ++b.sent_front;
      --m.out_reserved[ovc];
      --m.occ[go];
      ++moved;
      if (network) {
        const int gi = m.down_in[go];
        m.schedule(now_ + L, EventKind::flit, gi * V + v);
        if (metrics_) metrics_->on_link_flit(m.out_arc[go], now_);
        if (b.sent_front == 1) {
          Packet& pk = m.pool[id];
          m.in_push(gi * V + v, id);
          ++m.in_pkts[m.port_switch[gi]];
          pk.head_ready = now_ + L + RD;
        }
      } else {
        if (metrics_) metrics_->on_ejected_flit(now_ + L);
        if (b.sent_front == F) m.schedule(now_ + L, EventKind::deliver, id);
      }
      if (b.sent_front == F) {
        b.head = (b.head + 1) % m.ring_out;
        --b.count;
        b.sent_front = 0;
        --m.out_pkts[s];
        m.out_link_vc[go] = -1;
      }
    }
  }

  moved_last_ = moved;
  if (moved > 0) last_move_ = now_;
  if (in_network_ > 0 && now_ - last_move_ >= p_.deadlock_window)
    throw deadlock_detected(routing_.name() + ": no flit moved for " + std::to_string(now_ - last_move_) +
                            " cycles with " + std::to_string(in_network_) + " packets in the network (cycle " +
                            std::to_string(now_) + ")");
  ++now_;
}

void Simulator::check_invariants() const {
  const Impl& m = *impl_;
  const int V = m.V;
  if (injected_ != delivered_ + in_network_) throw invariant_violation("packet conservation violated");
  std::vector<int> in_flight_credit(m.credits.size(), 0);
  for (size_t i = 0; i < m.ib.size(); ++i) {
    const Buffer& b = m.ib[i];
    if (b.flits < 0 || b.flits > p_.input_buffer_flits) throw invariant_violation("input buffer occupancy out of range");
    if (b.count < 0 || b.count > m.ring_in) throw invariant_violation("input buffer packet count out of range");
  }
  for (size_t i = 0; i < m.ob.size(); ++i) {
    const Buffer& b = m.ob[i];
    if (m.out_reserved[i] < 0 || m.out_reserved[i] > p_.output_buffer_flits)
      throw invariant_violation("output buffer reservation out of range");
    if (b.flits < 0 || b.flits > m.out_reserved[i]) throw invariant_violation("output buffer occupancy out of range");
    if (m.credits[i] < 0 || m.credits[i] > p_.input_buffer_flits) throw invariant_violation("credit counter out of range");
  }
  for (size_t go = 0; go < m.occ.size(); ++go) {
    int sum = 0;
    for (int v = 0; v < V; ++v) sum += m.out_reserved[go * V + v];
    if (sum != m.occ[go]) throw invariant_violation("port occupancy disagrees with VC reservations");
  }
}

// ---------------------------------------------------------------- run modes

namespace {

void attach_trace(Simulator& sim, TraceSink trace) {
  if (!trace.out) return;
  write_trace_header(*trace.out);
  std::ostream* os = trace.out;
  sim.set_delivery_hook([os](const DeliveredPacket& p) { write_trace_row(*os, p); });
}

constexpr std::int64_t kInvariantPeriod = 256;

}  // namespace

RunMetrics run_bernoulli(const RoutingAlgorithm& routing, const TrafficPattern& pattern, const BernoulliRun& run,
                         const EngineParams& params, std::uint64_t seed, TraceSink trace) {
  EngineParams p = params;
  p.trace = p.trace || trace.out != nullptr;
  Simulator sim(routing, p, seed);
  const Topology& topo = routing.topology();
  MetricsAccumulator acc(topo.servers(), topo.arc_count(), run.warmup, run.warmup + run.measure);
  sim.set_metrics(&acc);
  attach_trace(sim, trace);
  sim.set_bernoulli(&pattern, run.load);
  const std::int64_t end = run.warmup + run.measure;
  while (sim.now() < end) {
    sim.step();
    if (sim.now() % kInvariantPeriod == 0) sim.check_invariants();
  }
  sim.check_invariants();
  std::vector<std::uint8_t> roles;
  if (auto* tera = dynamic_cast<const TeraRouting*>(&routing)) roles = tera->embedding().arc_roles();
  return acc.summarize(run.load, roles);
}

RunMetrics run_fixed_burst(const RoutingAlgorithm& routing, const TrafficPattern& pattern, int packets_per_server,
                           const EngineParams& params, std::uint64_t seed, std::int64_t max_cycles, TraceSink trace) {
  if (packets_per_server < 1) throw config_error("traffic.packets_per_server", "must be positive");
  EngineParams p = params;
  p.trace = p.trace || trace.out != nullptr;
  Simulator sim(routing, p, seed);
  const Topology& topo = routing.topology();
  MetricsAccumulator acc(topo.servers(), topo.arc_count(), 0, max_cycles);
  sim.set_metrics(&acc);
  attach_trace(sim, trace);
  Rng rng = make_rng(seed, Stream::pattern, 1);
  for (int k = 0; k < packets_per_server; ++k)
    for (ServerId s = 0; s < topo.servers(); ++s) sim.enqueue(s, pattern.destination(s, rng));
  const std::int64_t total = static_cast<std::int64_t>(packets_per_server) * topo.servers();
  while (sim.packets_delivered() < total) {
    if (sim.now() >= max_cycles) throw invariant_violation("fixed burst did not finish within the cycle limit");
    sim.step();
    if (sim.now() % kInvariantPeriod == 0) sim.check_invariants();
  }
  acc.close_window(sim.now());
  std::vector<std::uint8_t> roles;
  if (auto* tera = dynamic_cast<const TeraRouting*>(&routing)) roles = tera->embedding().arc_roles();
  RunMetrics m = acc.summarize(0.0, roles);
  m.cycles_to_finish = sim.now();
  return m;
}

namespace {

// Per-process phase barrier bookkeeping for kernel runs.
class KernelDriver {
 public:
  KernelDriver(const Kernel& k, std::vector<ServerId> map, Simulator& sim, bool overlap)
      : k_(k), map_(std::move(map)), sim_(sim), phase_(k.processes(), 0), pending_sends_(k.processes(), 0),
        received_(k.processes(), 0), phase_done_(k.phases(), 0), phase_finish_(k.phases(), 0), overlap_(overlap) {
    inverse_.assign(map_.size(), -1);
    for (size_t p = 0; p < map_.size(); ++p) inverse_[map_[p]] = static_cast<int>(p);
    remaining_ = k.processes();
    if (overlap_) {
      queue_everything();
      return;
    }
    for (int p = 0; p < k.processes(); ++p) begin_phase(p);
  }

  void on_delivery(const DeliveredPacket& d) {
    if (overlap_) {
      phase_finish_[d.tag] = std::max(phase_finish_[d.tag], d.delivered);
      finish_ = std::max(finish_, d.delivered);
      if (--outstanding_ == 0) remaining_ = 0;
      return;
    }
    const int src = inverse_[d.src], dst = inverse_[d.dst];
    --pending_sends_[src];
    if (d.tag == phase_[dst])
      ++received_[dst];
    else
      ++early_[key(dst, d.tag)];
    advance(src, d.delivered);
    if (dst != src) advance(dst, d.delivered);
  }

  bool done() const { return remaining_ == 0; }
  std::int64_t finish() const { return finish_; }
  const std::vector<std::int64_t>& phase_finish() const { return phase_finish_; }

 private:
  std::uint64_t key(int proc, int phase) const {
    return static_cast<std::uint64_t>(proc) * static_cast<std::uint64_t>(k_.phases()) + static_cast<std::uint64_t>(phase);
  }

  void begin_phase(int p) {
    while (phase_[p] < k_.phases()) {
      const int ph = phase_[p];
      msgs_.clear();
      k_.sends(p, ph, msgs_);
      int total = 0;
      for (const Message& msg : msgs_) {
        for (int i = 0; i < msg.packets; ++i) sim_.enqueue(map_[p], map_[msg.dst], ph);
        total += msg.packets;
      }
      pending_sends_[p] = total;
      received_[p] = 0;
      if (auto it = early_.find(key(p, ph)); it != early_.end()) {
        received_[p] = it->second;
        early_.erase(it);
      }
      if (total > 0 || received_[p] < k_.expected_packets_in(p, ph)) return;
      complete_phase(p, sim_.now());
    }
  }

  void queue_everything() {
    for (int p = 0; p < k_.processes(); ++p)
      for (int ph = 0; ph < k_.phases(); ++ph) {
        msgs_.clear();
        k_.sends(p, ph, msgs_);
        for (const Message& msg : msgs_)
          for (int i = 0; i < msg.packets; ++i) {
            sim_.enqueue(map_[p], map_[msg.dst], ph);
            ++outstanding_;
          }
      }
    if (outstanding_ == 0) remaining_ = 0;
  }

  void complete_phase(int p, std::int64_t when) {
    const int ph = phase_[p];
    phase_finish_[ph] = std::max(phase_finish_[ph], when);
    ++phase_done_[ph];
    ++phase_[p];
    if (phase_[p] == k_.phases()) {
      --remaining_;
      finish_ = std::max(finish_, when);
    }
  }

  void advance(int p, std::int64_t when) {
    if (phase_[p] >= k_.phases()) return;
    if (pending_sends_[p] > 0 || received_[p] < k_.expected_packets_in(p, phase_[p])) return;
    complete_phase(p, when);
    begin_phase(p);
  }

  const Kernel& k_;
  std::vector<ServerId> map_;
  std::vector<int> inverse_;
  Simulator& sim_;
  std::vector<int> phase_, pending_sends_, received_;
  std::vector<int> phase_done_;
  std::vector<std::int64_t> phase_finish_;
  std::unordered_map<std::uint64_t, int> early_;
  std::vector<Message> msgs_;
  bool overlap_;
  std::int64_t outstanding_ = 0;
  int remaining_ = 0;
  std::int64_t finish_ = 0;
};

}  // namespace

RunMetrics run_kernel(const RoutingAlgorithm& routing, const Kernel& kernel, Mapping mapping,
                      const EngineParams& params, std::uint64_t seed, std::int64_t max_cycles, TraceSink trace,
                      bool overlap) {
  const Topology& topo = routing.topology();
  if (kernel.processes() != topo.servers())
    throw config_error("traffic.kernel", "kernel has " + std::to_string(kernel.processes()) +
                                             " processes but the network has " + std::to_string(topo.servers()) +
                                             " servers");
  EngineParams p = params;
  p.trace = p.trace || trace.out != nullptr;
  Simulator sim(routing, p, seed);
  MetricsAccumulator acc(topo.servers(), topo.arc_count(), 0, max_cycles);
  sim.set_metrics(&acc);
  Rng map_rng = make_rng(seed, Stream::mapping);
  KernelDriver driver(kernel, map_processes(kernel.processes(), mapping, map_rng), sim, overlap);
  std::ostream* os = trace.out;
  if (os) write_trace_header(*os);
  sim.set_delivery_hook([&driver, os](const DeliveredPacket& d) {
    if (os) write_trace_row(*os, d);
    driver.on_delivery(d);
  });
  while (!driver.done()) {
    if (sim.now() >= max_cycles) throw invariant_violation("kernel did not finish within the cycle limit");
    sim.step();
    if (sim.now() % kInvariantPeriod == 0) sim.check_invariants();
  }
  acc.close_window(sim.now());
  std::vector<std::uint8_t> roles;
  if (auto* tera = dynamic_cast<const TeraRouting*>(&routing)) roles = tera->embedding().arc_roles();
  RunMetrics m = acc.summarize(0.0, roles);
  m.cycles_to_finish = driver.finish();
  m.phase_cycles = driver.phase_finish();
  return m;
}

void write_trace_header(std::ostream& os) { os << "packet,src,dst,created,injected,delivered,hops,tag,path\n"; }

void write_trace_row(std::ostream& os, const DeliveredPacket& p) {
  os << p.id << ',' << p.src << ',' << p.dst << ',' << p.created << ',' << p.injected << ',' << p.delivered << ','
     << p.hops << ',' << p.tag << ',';
  for (size_t i = 0; i < p.path.size(); ++i) os << (i ? "-" : "") << p.path[i];
  os << '\n';
}

}  // namespace fmnet
