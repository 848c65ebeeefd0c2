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
#include <sstream>

#include "fmnet/errors.hpp"
#include "fmnet/ordering.hpp"

namespace fmnet {
namespace {

// Oracle: brute-force triple count straight from the label rule.
std::int64_t brute_count(const ArcLabelling& lab) {
  const int n = lab.n();
  std::int64_t c = 0;
  for (int s = 0; s < n; ++s)
    for (int m = 0; m < n; ++m)
      for (int d = 0; d < n; ++d)
        if (s != m && m != d && s != d && lab.label(s, m) < lab.label(m, d)) ++c;
  return c;
}

TEST(Srinr, Labels) {
  const auto lab = ArcLabelling::srinr(5);
  EXPECT_EQ(lab.label(0, 1), 1);
  EXPECT_EQ(lab.label(1, 0), 4);
  EXPECT_EQ(lab.label(3, 1), 3);
  EXPECT_THROW(lab.label(2, 2), invalid_pair);
  EXPECT_THROW(lab.label(0, 5), invalid_pair);
}

TEST(Srinr, AllowedTriplesOnK4) {
  const auto lab = ArcLabelling::srinr(4);
  EXPECT_TRUE(allowed_2path(lab, 0, 1, 3));   // 1 < 2
  EXPECT_FALSE(allowed_2path(lab, 0, 2, 3));  // 2 < 1 fails
  EXPECT_FALSE(allowed_2path(lab, 0, 0, 3));
  // Labels tie whenever two hops have the same length, so 4 of the 12 paths a
  // fair strict order would allow are lost.
  EXPECT_EQ(count_allowed_paths(lab), 8);
}

// Utilization oracle: brute force over the triples touching one arc.
std::int64_t brute_utilization(const ArcLabelling& lab, int a, int b) {
  std::int64_t u = 0;
  for (int x = 0; x < lab.n(); ++x) {
    if (x == a || x == b) continue;
    u += lab.label(a, b) < lab.label(b, x);
    u += lab.label(x, a) < lab.label(a, b);
  }
  return u;
}

TEST(Srinr, CountsAndUtilization) {
  EXPECT_EQ(count_allowed_paths(ArcLabelling::srinr(8)), 144);
  EXPECT_EQ(arc_utilization(ArcLabelling::srinr(3), {0, 1}), 0);
  for (int n = 3; n <= 20; ++n) {
    const auto lab = ArcLabelling::srinr(n);
    EXPECT_EQ(count_allowed_paths(lab), brute_count(lab));
    EXPECT_EQ(count_allowed_paths(lab), static_cast<std::int64_t>(n) * ((n - 1) * (n - 2) / 2 - (n - 1) / 2));
    const auto util = arc_utilizations(lab);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        EXPECT_EQ(util[a * n + b], brute_utilization(lab, a, b));
        EXPECT_EQ(arc_utilization(lab, {a, b}), util[a * n + b]);
        // Only arcs of length n/2 escape the tie that costs every other arc one path.
        EXPECT_EQ(util[a * n + b], 2 * ((b - a + n) % n) == n ? n - 2 : n - 3);
      }
  }
}

TEST(Srinr, IntermediatesByParity) {
  for (int n = 4; n <= 24; n += 2) {
    const auto lab = ArcLabelling::srinr(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const auto ms = intermediates(lab, a, b);
        EXPECT_EQ(static_cast<int>(ms.size()), (a - b) % 2 == 0 ? (n - 4) / 2 : (n - 2) / 2);
        for (int m : ms) EXPECT_GT(srinr_gain(n, a, b, m), 0);
      }
  }
  EXPECT_THROW(intermediates(ArcLabelling::srinr(4), 1, 1), invalid_pair);
}

TEST(Srinr, GainPairingIdentity) {
  // For every y with 2y = a + b (mod n), reflecting i about y negates the
  // gain: -G_ab(y + x) = G_ab(y - x).
  for (int n : {5, 6, 9, 16})
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        int solutions = 0;
        for (int y = 0; y < n; ++y) {
          if ((2 * y - a - b) % n != 0) continue;
          ++solutions;
          for (int x = 0; x < n; ++x)
            EXPECT_EQ(-srinr_gain(n, a, b, (y + x) % n), srinr_gain(n, a, b, ((y - x) % n + n) % n));
        }
        EXPECT_EQ(solutions, n % 2 == 1 ? 1 : ((a + b) % 2 == 0 ? 2 : 0));
      }
}

TEST(Ordering, ParallelMatchesSerial) {
  for (int n : {5, 16, 33}) {
    const auto lab = ArcLabelling::srinr(n);
    EXPECT_EQ(count_allowed_paths(lab), serial::count_allowed_paths(lab));
    EXPECT_EQ(arc_utilizations(lab), serial::arc_utilizations(lab));
  }
}

TEST(Ordering, FairnessReport) {
  const auto even = verify_fair_ordering_theorem(ArcLabelling::srinr(10));
  EXPECT_FALSE(even.fair);
  EXPECT_EQ(even.min_utilization, 7);
  EXPECT_EQ(even.max_utilization, 8);
  EXPECT_EQ(even.allowed_paths, 320);
  EXPECT_EQ(even.fair_path_count, 360);
  EXPECT_TRUE(even.implication_holds);  // vacuous

  // Odd n: fair, but at n-3 per arc; the count formula assumes n-2.
  const auto odd = verify_fair_ordering_theorem(ArcLabelling::srinr(9));
  EXPECT_TRUE(odd.fair);
  EXPECT_EQ(odd.min_utilization, 6);
  EXPECT_FALSE(odd.count_matches);

  // A lexicographic total order is unfair.
  std::vector<Arc> order;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) order.push_back({i, j});
  const auto lex = ArcLabelling::from_order(5, order);
  const auto r2 = verify_fair_ordering_theorem(lex);
  EXPECT_FALSE(r2.fair);
  EXPECT_TRUE(r2.implication_holds);
  EXPECT_EQ(r2.allowed_paths, brute_count(lex));
}

TEST(Ordering, NoStrictOrderOnK3IsFair) {
  // On K_3 every strict order of the 6 arcs is enumerable. None is fair, so
  // the implication holds vacuously for all 720 of them.
  std::vector<Arc> arcs{{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
  int fair = 0;
  do {
    const auto rep = verify_fair_ordering_theorem(ArcLabelling::from_order(3, arcs));
    EXPECT_TRUE(rep.implication_holds);
    fair += rep.fair;
  } while (std::next_permutation(arcs.begin(), arcs.end()));
  EXPECT_EQ(fair, 0);
}

TEST(Ordering, LabellingFileRoundTrip) {
  const auto lab = ArcLabelling::srinr(6);
  std::stringstream ss;
  write_labelling(ss, lab);
  std::string first;
  std::getline(std::stringstream(ss.str()), first);
  EXPECT_EQ(first, "0 1 1");
  const auto back = read_labelling(ss);
  ASSERT_EQ(back.n(), 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      if (a != b) EXPECT_EQ(back.label(a, b), lab.label(a, b));
}

TEST(Ordering, MalformedFiles) {
  std::stringstream missing("0 1 1\n1 0 2\n0 2 3\n");
  EXPECT_THROW(read_labelling(missing), malformed_ordering);
  std::stringstream dup("0 1 1\n0 1 2\n1 0 3\n");
  EXPECT_THROW(read_labelling(dup), malformed_ordering);
  std::stringstream junk("0 1 x\n");
  EXPECT_THROW(read_labelling(junk), malformed_ordering);
  EXPECT_THROW(ArcLabelling::from_order(3, {{0, 1}, {1, 0}}), malformed_ordering);
}

}  // namespace
}  // namespace fmnet
