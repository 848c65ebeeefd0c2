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

#include "fmnet/errors.hpp"
#include "fmnet/verify.hpp"

namespace fmnet {
namespace {

TEST(Range, Parsing) {
  EXPECT_EQ(parse_range("3..64"), std::make_pair(3, 64));
  EXPECT_EQ(parse_range("16"), std::make_pair(16, 16));
  EXPECT_THROW(parse_range("9..3"), config_error);
  EXPECT_THROW(parse_range("a..b"), config_error);
  EXPECT_THROW(parse_range(""), config_error);
}

TEST(Subjects, TheoremAndClaim) {
  // Tied sRINR labels miss the fair-ordering count at every size.
  const auto t = verify_subject("theorem1", 3, 12);
  EXPECT_FALSE(t.pass());
  EXPECT_EQ(t.lines.size(), 10u);
  for (const auto& l : t.lines) EXPECT_FALSE(l.detail.empty());
  const auto c = verify_subject("claim", 4, 9);
  EXPECT_TRUE(c.pass());
  int skipped = 0;
  for (const auto& l : c.lines) skipped += l.skipped;
  EXPECT_EQ(skipped, 3);  // odd n
}

TEST(Subjects, CdgAndEscape) {
  EXPECT_TRUE(verify_subject("cdg:ordering(srinr)", 3, 10).pass());
  EXPECT_TRUE(verify_subject("cdg:valiant", 3, 8).pass());
  const auto bad = verify_subject("cdg:unrestricted", 4, 4);
  EXPECT_FALSE(bad.pass());
  EXPECT_FALSE(bad.lines.front().detail.empty());
  EXPECT_TRUE(verify_subject("escape:hypercube", 8, 8).pass());
  EXPECT_TRUE(verify_subject("escape:path", 3, 8).pass());
}

TEST(Subjects, Unknown) {
  EXPECT_THROW(verify_subject("lemma9", 3, 4), config_error);
  EXPECT_THROW(verify_subject("cdg:warp", 3, 4), config_error);
}

}  // namespace
}  // namespace fmnet
