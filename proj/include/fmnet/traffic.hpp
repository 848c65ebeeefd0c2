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
#include <string>
#include <vector>

#include "fmnet/rng.hpp"
#include "fmnet/topology.hpp"

namespace fmnet {

using ServerId = int;

// Destination generator for synthetic traffic.
class TrafficPattern {
 public:
  enum class Kind { uniform, rsp, shift, complement, fixed_random };

  // `seed` drives the one-time draws (the RSP derangement, fixed-random
  // targets); per-message draws use the Rng passed to destination().
  TrafficPattern(Kind kind, const Topology& topo, std::uint64_t seed);
  // Accepts: uniform, rsp, shift, complement, fixed_random.
  static TrafficPattern parse(const std::string& name, const Topology& topo, std::uint64_t seed);

  Kind kind() const { return kind_; }
  std::string name() const;

  // uniform: any server except `src`. rsp/shift/complement: a uniform server of
  // the mapped switch. fixed_random: the target drawn for `src` at setup.
  ServerId destination(ServerId src, Rng& rng) const;

  // Switch map for switch-level patterns (empty for uniform/fixed_random).
  const std::vector<SwitchId>& switch_map() const { return switch_map_; }

 private:
  Kind kind_;
  int n_;
  int spw_;
  std::vector<SwitchId> switch_map_;
  std::vector<ServerId> fixed_;
};

// Uniform random permutation of 0..n-1 without fixed points (rejection
// sampling). Throws invalid_size for n < 2.
std::vector<int> random_derangement(int n, Rng& rng);

// One logical message of a kernel phase.
struct Message {
  int dst = 0;      // destination process
  int packets = 1;  // payload in packets
};

// Phase-structured communication kernel over P processes. A process enters
// phase i+1 only after its phase-i sends are delivered and its phase-i
// receives have arrived.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual std::string name() const = 0;
  int processes() const { return processes_; }
  virtual int phases() const = 0;
  // Messages process `proc` sends in `phase` (appended to out).
  virtual void sends(int proc, int phase, std::vector<Message>& out) const = 0;
  // Packets process `proc` receives in `phase`.
  virtual int expected_packets_in(int proc, int phase) const = 0;

 protected:
  explicit Kernel(int processes) : processes_(processes) {}
  int processes_;
};

// Phase i = 1..P-1: process t sends to t+i mod P.
class All2AllKernel final : public Kernel {
 public:
  All2AllKernel(int processes, int message_packets);
  std::string name() const override { return "all2all"; }
  int phases() const override { return processes_ - 1; }
  void sends(int proc, int phase, std::vector<Message>& out) const override;
  int expected_packets_in(int, int) const override { return packets_; }

 private:
  int packets_;
};

// Toroidal stencil on a 2D or 3D process grid (x fastest); every iteration
// each process sends to all 8 (2D) or 26 (3D) neighbours.
class StencilKernel final : public Kernel {
 public:
  // dims of size 2 or 3 whose product is the process count.
  StencilKernel(std::vector<int> dims, int iterations, int message_packets);
  std::string name() const override { return dims_.size() == 2 ? "stencil2d" : "stencil3d"; }
  int phases() const override { return iterations_; }
  void sends(int proc, int phase, std::vector<Message>& out) const override;
  int expected_packets_in(int, int) const override { return neighbours_ * packets_; }
  const std::vector<int>& dims() const { return dims_; }

 private:
  std::vector<int> dims_;
  int iterations_;
  int packets_;
  int neighbours_;
};

// Two transposition phases on an R x C process grid: all-to-all within each
// row, then within each column. Each all-to-all uses the classical send loop.
class Fft3dKernel final : public Kernel {
 public:
  Fft3dKernel(int rows, int cols, int message_packets);
  std::string name() const override { return "fft3d"; }
  int phases() const override { return (cols_ - 1) + (rows_ - 1); }
  void sends(int proc, int phase, std::vector<Message>& out) const override;
  int expected_packets_in(int, int) const override { return packets_; }

 private:
  int rows_, cols_, packets_;
};

// Rabenseifner allreduce: recursive-halving reduce-scatter followed by
// recursive-doubling allgather. Step k (1-based) of the reduce-scatter exchanges
// base/2^k packets with the partner at distance P/2^k; the allgather mirrors
// it. Sizes are floored at one packet. Throws unsupported_size unless P is a
// power of two >= 2.
class AllreduceKernel final : public Kernel {
 public:
  AllreduceKernel(int processes, int base_packets);
  std::string name() const override { return "allreduce"; }
  int phases() const override { return 2 * log2p_; }
  void sends(int proc, int phase, std::vector<Message>& out) const override;
  int expected_packets_in(int proc, int phase) const override;
  int partner(int proc, int phase) const;
  int step_packets(int phase) const;

 private:
  int log2p_;
  int base_;
};

// Builds a kernel by name: all2all, stencil2d, stencil3d, fft3d, allreduce.
// Grid shapes are balanced factorizations of the process count.
struct KernelOptions {
  int message_packets = 1;
  int iterations = 1;
  int allreduce_base_packets = 64;
  // Waive the per-process phase barrier: every process queues all of its
  // sends up front, in phase order, as in an unsynchronized send loop.
  bool overlap = false;
};
std::unique_ptr<Kernel> make_kernel(const std::string& name, int processes, const KernelOptions& opt);

enum class Mapping { linear, random };
Mapping parse_mapping(const std::string& s);

// process -> server. linear: identity; random: uniform permutation.
std::vector<ServerId> map_processes(int processes, Mapping mapping, Rng& rng);

}  // namespace fmnet
