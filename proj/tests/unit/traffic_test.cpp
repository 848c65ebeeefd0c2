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

#include <algorithm>
#include <map>
#include <set>

#include "fmnet/errors.hpp"
#include "fmnet/traffic.hpp"

namespace fmnet {
namespace {

TEST(Patterns, ShiftAndComplement) {
  const Topology t = Topology::complete_graph(8, 4);
  const auto shift = TrafficPattern::parse("shift", t, 1);
  const auto comp = TrafficPattern::parse("complement", t, 1);
  for (int x = 0; x < 8; ++x) {
    EXPECT_EQ(shift.switch_map()[x], (x + 1) % 8);
    EXPECT_EQ(comp.switch_map()[x], 7 - x);
  }
  Rng rng = make_rng(1, Stream::traffic);
  for (int k = 0; k < 200; ++k) {
    const ServerId src = k % 32;
    EXPECT_EQ(shift.destination(src, rng) / 4, (src / 4 + 1) % 8);
  }
}

TEST(Patterns, UniformExcludesSelf) {
  const Topology t = Topology::complete_graph(2, 2);
  const auto u = TrafficPattern::parse("uniform", t, 1);
  Rng rng = make_rng(1, Stream::traffic);
  std::set<ServerId> seen;
  for (int k = 0; k < 500; ++k) {
    const ServerId d = u.destination(0, rng);
    EXPECT_NE(d, 0);
    seen.insert(d);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Patterns, RspIsADerangementFixedBySeed) {
  const Topology t = Topology::complete_graph(64, 1);
  const auto a = TrafficPattern::parse("rsp", t, 5), b = TrafficPattern::parse("rsp", t, 5);
  EXPECT_EQ(a.switch_map(), b.switch_map());
  std::set<int> img(a.switch_map().begin(), a.switch_map().end());
  EXPECT_EQ(img.size(), 64u);
  for (int x = 0; x < 64; ++x) EXPECT_NE(a.switch_map()[x], x);
  EXPECT_THROW(TrafficPattern::parse("tornado", t, 1), config_error);
}

TEST(Derangement, UniformOverAllNine) {
  // n = 4 has 9 derangements; each should appear about equally often.
  Rng rng = make_rng(11, Stream::pattern);
  std::map<std::vector<int>, int> count;
  const int trials = 36000;
  for (int k = 0; k < trials; ++k) ++count[random_derangement(4, rng)];
  ASSERT_EQ(count.size(), 9u);
  for (const auto& [p, c] : count) EXPECT_NEAR(c / static_cast<double>(trials), 1.0 / 9, 0.01);
  EXPECT_THROW(random_derangement(1, rng), invalid_size);
}

int total_packets(const Kernel& k) {
  int total = 0;
  std::vector<Message> out;
  for (int p = 0; p < k.processes(); ++p)
    for (int ph = 0; ph < k.phases(); ++ph) {
      out.clear();
      k.sends(p, ph, out);
      for (const auto& m : out) total += m.packets;
    }
  return total;
}

// Sent and expected-in counts must balance per phase and process.
void expect_balanced(const Kernel& k) {
  std::vector<Message> out;
  for (int ph = 0; ph < k.phases(); ++ph) {
    std::vector<int> in(k.processes(), 0);
    for (int p = 0; p < k.processes(); ++p) {
      out.clear();
      k.sends(p, ph, out);
      for (const auto& m : out) {
        EXPECT_NE(m.dst, p);
        in[m.dst] += m.packets;
      }
    }
    for (int p = 0; p < k.processes(); ++p) EXPECT_EQ(in[p], k.expected_packets_in(p, ph)) << k.name() << ph;
  }
}

TEST(Kernels, MessageCounts) {
  KernelOptions o;
  o.message_packets = 2;
  o.iterations = 3;
  o.allreduce_base_packets = 64;
  const auto a2a = make_kernel("all2all", 16, o);
  EXPECT_EQ(a2a->phases(), 15);
  EXPECT_EQ(total_packets(*a2a), 16 * 15 * 2);
  const auto s2 = make_kernel("stencil2d", 16, o);
  EXPECT_EQ(total_packets(*s2), 16 * 8 * 2 * 3);
  const auto s3 = make_kernel("stencil3d", 64, o);
  EXPECT_EQ(total_packets(*s3), 64 * 26 * 2 * 3);
  const auto fft = make_kernel("fft3d", 16, o);
  EXPECT_EQ(fft->phases(), 3 + 3);
  EXPECT_EQ(total_packets(*fft), 16 * 6 * 2);
  for (const auto* k : {a2a.get(), s2.get(), s3.get(), fft.get()}) expect_balanced(*k);
}

TEST(Kernels, AllreduceAtEight) {
  const AllreduceKernel k(8, 64);
  ASSERT_EQ(k.phases(), 6);
  const std::vector<int> partner_of_5{1, 7, 4, 4, 7, 1};
  const std::vector<int> sizes{32, 16, 8, 8, 16, 32};
  for (int ph = 0; ph < 6; ++ph) {
    EXPECT_EQ(k.partner(5, ph), partner_of_5[ph]);
    EXPECT_EQ(k.step_packets(ph), sizes[ph]);
  }
  expect_balanced(k);
  EXPECT_EQ(AllreduceKernel(8, 4).step_packets(2), 1);  // floored at one packet
  EXPECT_THROW(AllreduceKernel(12, 64), unsupported_size);
}

TEST(Kernels, StencilNeighbours) {
  const StencilKernel k({4, 4}, 1, 1);
  std::vector<Message> out;
  k.sends(0, 0, out);
  std::set<int> dst;
  for (const auto& m : out) dst.insert(m.dst);
  EXPECT_EQ(dst, (std::set<int>{1, 3, 4, 5, 7, 12, 13, 15}));
}

TEST(Mapping, LinearAndRandom) {
  Rng rng = make_rng(1, Stream::mapping);
  const auto lin = map_processes(10, Mapping::linear, rng);
  for (int p = 0; p < 10; ++p) EXPECT_EQ(lin[p], p);
  auto rnd = map_processes(10, Mapping::random, rng);
  std::sort(rnd.begin(), rnd.end());
  EXPECT_EQ(rnd, lin);
  EXPECT_EQ(parse_mapping("random"), Mapping::random);
  EXPECT_THROW(parse_mapping("block"), config_error);
}

}  // namespace
}  // namespace fmnet
