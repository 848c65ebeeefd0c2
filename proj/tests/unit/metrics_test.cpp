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

#include <numeric>

#include "fmnet/metrics.hpp"

namespace fmnet {
namespace {

TEST(Jain, Examples) {
  EXPECT_DOUBLE_EQ(jain_index({1, 1, 0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(jain_index({3, 3, 3}), 1.0);
  EXPECT_DOUBLE_EQ(jain_index({1, 0, 0, 0}), 0.25);
  EXPECT_THROW(jain_index({}), std::invalid_argument);
  EXPECT_THROW(jain_index({0, 0}), std::invalid_argument);
  EXPECT_THROW(jain_index({1, -1}), std::invalid_argument);
}

TEST(NearestRank, OneToHundred) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(nearest_rank(v, 0.99), 99);
  EXPECT_EQ(nearest_rank(v, 0.999), 100);
  EXPECT_EQ(nearest_rank(v, 0.5), 50);
  EXPECT_EQ(nearest_rank(v, 1.0), 100);
  EXPECT_EQ(nearest_rank(v, 0.001), 1);
  EXPECT_THROW(nearest_rank(v, 0.0), std::invalid_argument);
  EXPECT_THROW(nearest_rank({}, 0.5), std::invalid_argument);
  const auto ps = latency_percentiles({5, 1, 4, 2, 3}, {0.2, 0.6, 1.0});
  EXPECT_EQ(ps, (std::vector<double>{1, 3, 5}));
}

TEST(HopDistribution, BucketsAndOverflow) {
  const auto d = hop_distribution({1, 1, 2, 2, 2, 5, 7, 0});
  ASSERT_EQ(d.size(), 5u);
  EXPECT_DOUBLE_EQ(d[0], 1.0 / 8);
  EXPECT_DOUBLE_EQ(d[1], 2.0 / 8);
  EXPECT_DOUBLE_EQ(d[2], 3.0 / 8);
  EXPECT_DOUBLE_EQ(d[3], 0.0);
  EXPECT_DOUBLE_EQ(d[4], 2.0 / 8);
  EXPECT_EQ(hop_distribution_from_histogram({1, 2, 3, 0, 0, 1, 0, 1}), d);
  EXPECT_THROW(hop_distribution({}), std::invalid_argument);
}

TEST(Utilization, SplitByRole) {
  const auto s = link_utilization_split({10, 20, 30, 40}, {0, 0, 1, 1}, 100);
  EXPECT_DOUBLE_EQ(s.main, 0.15);
  ASSERT_TRUE(s.service.has_value());
  EXPECT_DOUBLE_EQ(*s.service, 0.35);
  const auto all_main = link_utilization_split({10, 30}, {}, 100);
  EXPECT_DOUBLE_EQ(all_main.main, 0.2);
  EXPECT_FALSE(all_main.service.has_value());
}

TEST(Accumulator, WindowOnly) {
  MetricsAccumulator acc(2, 1, 10, 20);
  acc.on_injected_flit(0, 5);
  acc.on_injected_flit(0, 10);
  acc.on_injected_flit(1, 19);
  acc.on_injected_flit(1, 20);
  EXPECT_EQ(acc.injected_flits(), (std::vector<std::int64_t>{1, 1}));
  acc.on_link_flit(0, 12);
  acc.on_ejected_flit(15);
  acc.on_ejected_flit(25);
  EXPECT_EQ(acc.ejected_flits(), 1);
  EXPECT_EQ(acc.busy_cycles().front(), 1);
}

TEST(Csv, RoundTrip) {
  ResultRow r;
  r.config_hash = "0123456789abcdef";
  r.seed = 42;
  r.routing = "TERA-HX3";
  r.pattern = "rsp";
  r.m.offered = 0.5;
  r.m.accepted = 0.4625;
  r.m.mean_latency = 123.25;
  r.m.p99 = 300;
  r.m.p999 = 400;
  r.m.p9999 = 500;
  r.m.jain = 0.991;
  r.m.hops = {0.01, 0.5, 0.4, 0.08, 0.01};
  r.m.util_main = 0.7;
  r.m.util_service = 0.6;
  r.m.cycles_to_finish = -1;
  const std::string line = to_csv(r);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 18);
  const std::string header = csv_header();
  EXPECT_EQ(header.rfind("config_hash,seed,routing,pattern,offered,accepted", 0), 0u);
  EXPECT_NE(header.find("hops_0,hops_1,hops_2,hops_3,hops_4,util_main,util_service,cycles_to_finish"),
            std::string::npos);
  const ResultRow back = parse_csv_row(line);
  EXPECT_EQ(to_csv(back), line);
  EXPECT_EQ(back.routing, "TERA-HX3");
  EXPECT_DOUBLE_EQ(back.m.accepted, 0.4625);
}

}  // namespace
}  // namespace fmnet
