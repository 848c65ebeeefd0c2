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

#include "fmnet/analysis.hpp"
#include "fmnet/service.hpp"

namespace fmnet {
namespace {

TEST(Estimate, Formula) {
  EXPECT_DOUBLE_EQ(estimate_throughput(1.0), 0.5);
  EXPECT_NEAR(estimate_throughput(0.5), 1.0 / 3, 1e-15);
  EXPECT_NEAR(estimate_throughput(54.0 / 63), 54.0 / 117, 1e-15);
  EXPECT_THROW(estimate_throughput(0.0), std::domain_error);
  EXPECT_THROW(estimate_throughput(1.0001), std::domain_error);
}

TEST(Estimate, CurveCountsArcsExactly) {
  const auto path = estimate_curve(ServiceSpec::parse("path"), {4, 16});
  ASSERT_EQ(path.size(), 2u);
  EXPECT_DOUBLE_EQ(path[0].p, 0.5);
  EXPECT_DOUBLE_EQ(path[1].p, 1.0 - 2.0 / 16);
  const auto hx = estimate_curve(ServiceSpec::parse("hyperx(d=3)"), {64});
  EXPECT_NEAR(hx[0].p, 54.0 / 63, 1e-12);
  EXPECT_NEAR(hx[0].estimate, estimate_throughput(54.0 / 63), 1e-15);
  EXPECT_THROW(estimate_curve(ServiceSpec::parse("hypercube"), {12}), std::invalid_argument);
}

TEST(Gamma, ChainHoldsAndFormsAgree) {
  for (int n : {4, 16, 64})
    for (double p : {0.1, 0.5, 54.0 / 63, 1.0})
      for (double g1 : {0.0, 0.3, 1.0}) {
        const GammaBound b = gamma_bound(n, p, g1);
        EXPECT_TRUE(gamma_chain_holds(b));
        EXPECT_NEAR(b.gamma2_max, b.gamma2_max_alt, 1e-12);
        EXPECT_NEAR(b.gamma_max, b.gamma_closed, 1e-12);
        EXPECT_LE(b.gamma_max, b.gamma_upper + 1e-12);
        EXPECT_NEAR(b.main_load, b.main_capacity, 1e-9);
        EXPECT_LE(b.per_server, b.per_server_bound + 1e-12);
      }
  EXPECT_THROW(gamma_bound(1, 0.5, 0.5), std::domain_error);
  EXPECT_THROW(gamma_bound(8, 0.5, 1.5), std::domain_error);
  EXPECT_THROW(gamma_bound(8, 0.0, 0.5), std::domain_error);
}

TEST(Gamma, BrokenChainDetected) {
  GammaBound b = gamma_bound(16, 0.5, 0.5);
  b.gamma_closed += 0.1;
  EXPECT_FALSE(gamma_chain_holds(b));
}

TEST(Estimate, RelativeGap) {
  EXPECT_DOUBLE_EQ(relative_gap(0.46, 0.5), 0.08);
  EXPECT_NEAR(relative_gap(0.55, 0.5), 0.1, 1e-12);
}

}  // namespace
}  // namespace fmnet
