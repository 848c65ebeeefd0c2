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

#include "fmnet/traffic.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "fmnet/errors.hpp"
#include "fmnet/service.hpp"

namespace fmnet {

std::vector<int> random_derangement(int n, Rng& rng) {
  if (n < 2) throw invalid_size("a derangement needs n >= 2");
  std::vector<int> p(n);
  for (;;) {
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = p[i] != i;
    if (ok) return p;
  }
}

TrafficPattern::TrafficPattern(Kind kind, const Topology& topo, std::uint64_t seed)
    : kind_(kind), n_(topo.switches()), spw_(topo.servers_per_switch()) {
  Rng rng = make_rng(seed, Stream::pattern);
  const int servers = n_ * spw_;
  if (servers < 2) throw invalid_size("traffic needs at least two servers");
  switch (kind) {
    case Kind::uniform:
      break;
    case Kind::rsp:
      switch_map_ = random_derangement(n_, rng);
      break;
    case Kind::shift:
      switch_map_.resize(n_);
      for (int x = 0; x < n_; ++x) switch_map_[x] = (x + 1) % n_;
      break;
    case Kind::complement:
      switch_map_.resize(n_);
      for (int x = 0; x < n_; ++x) switch_map_[x] = ((-x - 1) % n_ + n_) % n_;
      break;
    case Kind::fixed_random:
      fixed_.resize(servers);
      for (int s = 0; s < servers; ++s) {
        int d = uniform_below(rng, servers - 1);
        if (d >= s) ++d;
        fixed_[s] = d;
      }
      break;
  }
}

TrafficPattern TrafficPattern::parse(const std::string& name, const Topology& topo, std::uint64_t seed) {
  if (name == "uniform") return TrafficPattern(Kind::uniform, topo, seed);
  if (name == "rsp") return TrafficPattern(Kind::rsp, topo, seed);
  if (name == "shift") return TrafficPattern(Kind::shift, topo, seed);
  if (name == "complement") return TrafficPattern(Kind::complement, topo, seed);
  if (name == "fixed_random" || name == "fr") return TrafficPattern(Kind::fixed_random, topo, seed);
  throw config_error("traffic.pattern", "unknown pattern '" + name + "'");
}

std::string TrafficPattern::name() const {
  switch (kind_) {
    case Kind::uniform: return "uniform";
    case Kind::rsp: return "rsp";
    case Kind::shift: return "shift";
    case Kind::complement: return "complement";
    case Kind::fixed_random: return "fixed_random";
  }
  return "?";
}

ServerId TrafficPattern::destination(ServerId src, Rng& rng) const {
  switch (kind_) {
    case Kind::uniform: {
      int d = uniform_below(rng, n_ * spw_ - 1);
      return d >= src ? d + 1 : d;
    }
    case Kind::fixed_random:
      return fixed_[src];
    default:
      return switch_map_[src / spw_] * spw_ + uniform_below(rng, spw_);
  }
}

// ---------------------------------------------------------------- kernels

All2AllKernel::All2AllKernel(int processes, int message_packets) : Kernel(processes), packets_(message_packets) {
  if (processes < 2) throw invalid_size("all2all needs at least two processes");
  if (message_packets < 1) throw std::invalid_argument("message size must be positive");
}

void All2AllKernel::sends(int proc, int phase, std::vector<Message>& out) const {
  out.push_back({(proc + phase + 1) % processes_, packets_});
}

StencilKernel::StencilKernel(std::vector<int> dims, int iterations, int message_packets)
    : Kernel(std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>())),
      dims_(std::move(dims)),
      iterations_(iterations),
      packets_(message_packets) {
  if (dims_.size() != 2 && dims_.size() != 3) throw invalid_size("stencil grids are 2D or 3D");
  if (std::any_of(dims_.begin(), dims_.end(), [](int d) { return d < 1; })) throw invalid_size("empty stencil dim");
  if (iterations < 1 || message_packets < 1) throw std::invalid_argument("stencil iterations and size must be positive");
  neighbours_ = dims_.size() == 2 ? 8 : 26;
}

void StencilKernel::sends(int proc, int, std::vector<Message>& out) const {
  const int nd = static_cast<int>(dims_.size());
  std::vector<int> c(nd);
  int rest = proc;
  for (int k = 0; k < nd; ++k) {
    c[k] = rest % dims_[k];
    rest /= dims_[k];
  }
  // Enumerate offsets in {-1,0,1}^nd except the origin.
  const int combos = nd == 2 ? 9 : 27;
  for (int code = 0; code < combos; ++code) {
    int t = code, dst = 0, stride = 1;
    bool origin = true;
    for (int k = 0; k < nd; ++k) {
      const int off = t % 3 - 1;
      t /= 3;
      origin = origin && off == 0;
      dst += ((c[k] + off + dims_[k]) % dims_[k]) * stride;
      stride *= dims_[k];
    }
    if (!origin) out.push_back({dst, packets_});
  }
}

Fft3dKernel::Fft3dKernel(int rows, int cols, int message_packets)
    : Kernel(rows * cols), rows_(rows), cols_(cols), packets_(message_packets) {
  if (rows < 2 || cols < 2) throw invalid_size("fft3d needs a grid of at least 2x2");
  if (message_packets < 1) throw std::invalid_argument("message size must be positive");
}

void Fft3dKernel::sends(int proc, int phase, std::vector<Message>& out) const {
  const int r = proc / cols_, c = proc % cols_;
  if (phase < cols_ - 1) {
    out.push_back({r * cols_ + (c + phase + 1) % cols_, packets_});
  } else {
    const int i = phase - (cols_ - 1) + 1;
    out.push_back({((r + i) % rows_) * cols_ + c, packets_});
  }
}

AllreduceKernel::AllreduceKernel(int processes, int base_packets) : Kernel(processes), base_(base_packets) {
  if (processes < 2 || !std::has_single_bit(static_cast<unsigned>(processes)))
    throw unsupported_size("allreduce needs a power-of-two process count, got " + std::to_string(processes));
  if (base_packets < 1) throw std::invalid_argument("allreduce base size must be positive");
  log2p_ = std::countr_zero(static_cast<unsigned>(processes));
}

int AllreduceKernel::partner(int proc, int phase) const {
  // Reduce-scatter halves the distance each step; allgather doubles it back.
  const int step = phase < log2p_ ? phase : 2 * log2p_ - 1 - phase;
  return proc ^ (processes_ >> (step + 1));
}

int AllreduceKernel::step_packets(int phase) const {
  const int step = phase < log2p_ ? phase : 2 * log2p_ - 1 - phase;
  return std::max(1, base_ >> (step + 1));
}

void AllreduceKernel::sends(int proc, int phase, std::vector<Message>& out) const {
  out.push_back({partner(proc, phase), step_packets(phase)});
}

int AllreduceKernel::expected_packets_in(int, int phase) const { return step_packets(phase); }

std::unique_ptr<Kernel> make_kernel(const std::string& name, int processes, const KernelOptions& opt) {
  if (name == "all2all") return std::make_unique<All2AllKernel>(processes, opt.message_packets);
  if (name == "stencil2d")
    return std::make_unique<StencilKernel>(balanced_factorization(processes, 2), opt.iterations, opt.message_packets);
  if (name == "stencil3d")
    return std::make_unique<StencilKernel>(balanced_factorization(processes, 3), opt.iterations, opt.message_packets);
  if (name == "fft3d") {
    const auto f = balanced_factorization(processes, 2);
    return std::make_unique<Fft3dKernel>(f[1], f[0], opt.message_packets);
  }
  if (name == "allreduce") return std::make_unique<AllreduceKernel>(processes, opt.allreduce_base_packets);
  throw config_error("traffic.kernel", "unknown kernel '" + name + "'");
}

Mapping parse_mapping(const std::string& s) {
  if (s == "linear") return Mapping::linear;
  if (s == "random") return Mapping::random;
  throw config_error("traffic.mapping", "mapping must be linear or random, got '" + s + "'");
}

std::vector<ServerId> map_processes(int processes, Mapping mapping, Rng& rng) {
  std::vector<ServerId> m(processes);
  std::iota(m.begin(), m.end(), 0);
  if (mapping == Mapping::random) std::shuffle(m.begin(), m.end(), rng);
  return m;
}

}  // namespace fmnet
