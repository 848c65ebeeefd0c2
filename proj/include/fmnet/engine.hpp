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
#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "fmnet/metrics.hpp"
#include "fmnet/routing.hpp"
#include "fmnet/traffic.hpp"

namespace fmnet {

struct EngineParams {
  int packet_flits = 16;
  int input_buffer_flits = 160;   // per VC
  int output_buffer_flits = 80;   // per VC
  int link_latency = 1;
  int credit_latency = 1;
  int router_delay = 2;           // head arrival to first allocation attempt
  int speedup = 2;                // allocation/transfer rounds per cycle
  std::int64_t deadlock_window = 10000;
  // A blocked head is routed again every cycle, so the decision binds only
  // when an output is acquired. Routings that commit early opt out.
  bool reroute_blocked = true;
  bool trace = false;

  void validate() const;
};

// Cycles a packet needs on an empty network: every link costs link_latency,
// every switch router_delay, and the tail trails the head by size-1 cycles.
inline std::int64_t zero_load_latency(const EngineParams& p, int network_hops) {
  const int links = network_hops + 2;  // injection + network + ejection
  const int switches = network_hops + 1;
  return static_cast<std::int64_t>(links) * p.link_latency + static_cast<std::int64_t>(switches) * p.router_delay +
         (p.packet_flits - 1);
}

struct DeliveredPacket {
  std::int64_t id;
  ServerId src, dst;
  std::int64_t created, injected, delivered;
  int hops;
  int tag;
  std::vector<SwitchId> path;  // filled only when tracing
};

// Flit-level, cycle-driven network of input-queued switches with credit flow
// control and virtual cut-through. Single-threaded and deterministic per seed.
//
// Each cycle: (1) flits and credits scheduled for this cycle land; (2) Bernoulli
// generation and injection links; (3) `speedup` rounds of crossbar allocation
// then one-flit transfer per connection; (4) output links send one flit each.
class Simulator {
 public:
  Simulator(const RoutingAlgorithm& routing, const EngineParams& params, std::uint64_t seed);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  // Source-queue a packet at `src` for `dst`; `tag` travels with it.
  void enqueue(ServerId src, ServerId dst, int tag = 0);
  // Every server generates packets with probability load/packet_flits per cycle;
  // destinations come from the pattern when the packet is injected.
  void set_bernoulli(const TrafficPattern* pattern, double load);
  void set_metrics(MetricsAccumulator* acc) { metrics_ = acc; }
  void set_delivery_hook(std::function<void(const DeliveredPacket&)> hook) { on_delivery_ = std::move(hook); }

  void step();
  std::int64_t now() const { return now_; }

  std::int64_t packets_in_network() const { return in_network_; }
  std::int64_t packets_queued() const { return queued_; }
  std::int64_t packets_injected() const { return injected_; }
  std::int64_t packets_delivered() const { return delivered_; }
  std::int64_t flits_moved_last_cycle() const { return moved_last_; }
  int max_hops_seen() const { return max_hops_seen_; }

  // Buffer/credit consistency and packet conservation; throws
  // invariant_violation. Cost is linear in the network size.
  void check_invariants() const;

  const RoutingAlgorithm& routing() const { return routing_; }
  const EngineParams& params() const { return p_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  const RoutingAlgorithm& routing_;
  EngineParams p_;
  bool reroute_;
  MetricsAccumulator* metrics_ = nullptr;
  std::function<void(const DeliveredPacket&)> on_delivery_;
  std::int64_t now_ = 0;
  std::int64_t in_network_ = 0, queued_ = 0, injected_ = 0, delivered_ = 0;
  std::int64_t moved_last_ = 0;
  std::int64_t last_move_ = 0;
  int max_hops_seen_ = 0;
};

// ---------------------------------------------------------------- run modes

struct BernoulliRun {
  double load = 0.1;
  std::int64_t warmup = 0;
  std::int64_t measure = 80000;
};

struct TraceSink {
  std::ostream* out = nullptr;  // per-packet CSV when non-null
};

// Warmup then measurement window; metrics cover the window only.
RunMetrics run_bernoulli(const RoutingAlgorithm& routing, const TrafficPattern& pattern, const BernoulliRun& run,
                         const EngineParams& params, std::uint64_t seed, TraceSink trace = {});

// Every server starts with `packets_per_server` queued packets; runs until all
// are delivered and reports cycles_to_finish. Aborts after max_cycles.
RunMetrics run_fixed_burst(const RoutingAlgorithm& routing, const TrafficPattern& pattern, int packets_per_server,
                           const EngineParams& params, std::uint64_t seed, std::int64_t max_cycles = 100000000,
                           TraceSink trace = {});

// Runs a kernel until every process completes its last phase. With a strict
// per-process phase barrier unless `overlap`, in which case all sends are
// queued at cycle 0 and a phase ends with the last delivery carrying its tag.
RunMetrics run_kernel(const RoutingAlgorithm& routing, const Kernel& kernel, Mapping mapping,
                      const EngineParams& params, std::uint64_t seed, std::int64_t max_cycles = 100000000,
                      TraceSink trace = {}, bool overlap = false);

void write_trace_header(std::ostream& os);
void write_trace_row(std::ostream& os, const DeliveredPacket& p);

}  // namespace fmnet
