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
#include <iosfwd>
#include <vector>

#include "fmnet/topology.hpp"

namespace fmnet {

// Integer label per directed arc of K_n. A 2-hop route s->m->d is allowed when
// the labels strictly increase along it. Labels are compared by value, so
// schemes that reuse a value across arcs (sRINR) work alongside strict total
// orders loaded from a file.
class ArcLabelling {
 public:
  // label(i, j) = (j - i) mod n.
  static ArcLabelling srinr(int n);
  // Label = 1-based position in `order`, which must list each of the
  // n(n-1) arcs exactly once.
  static ArcLabelling from_order(int n, const std::vector<Arc>& order);
  // Explicit (arc, label) triples; every arc must appear exactly once.
  static ArcLabelling from_labels(int n, const std::vector<std::pair<Arc, int>>& labels);

  int n() const { return n_; }
  // Throws invalid_pair for i == j or out-of-range ids.
  int label(SwitchId i, SwitchId j) const;
  // Unchecked; i != j assumed.
  int raw(SwitchId i, SwitchId j) const { return labels_[static_cast<size_t>(i) * n_ + j]; }

 private:
  ArcLabelling() = default;
  int n_ = 0;
  std::vector<int> labels_;
};

// D(i, j) = (j - i) mod n, with D(i, i) = 0.
inline int srinr_distance(int n, SwitchId i, SwitchId j) { return ((j - i) % n + n) % n; }

// G_ab(i) = D(i, b) - D(a, i) under sRINR; positive exactly when a->i->b is
// allowed (for i distinct from a and b).
inline int srinr_gain(int n, SwitchId a, SwitchId b, SwitchId i) { return srinr_distance(n, i, b) - srinr_distance(n, a, i); }

// False whenever two of s, m, d coincide.
bool allowed_2path(const ArcLabelling& lab, SwitchId s, SwitchId m, SwitchId d);

// Number of allowed ordered triples (s, m, d). OpenMP-parallel over s.
std::int64_t count_allowed_paths(const ArcLabelling& lab);

// Allowed 2-paths whose first or second hop is `arc`.
std::int64_t arc_utilization(const ArcLabelling& lab, const Arc& arc);

// Utilization of every arc, indexed [src * n + dst] (diagonal entries 0).
// OpenMP-parallel over source switches.
std::vector<std::int64_t> arc_utilizations(const ArcLabelling& lab);

// Serial references for the parallel kernels above; tests and the benchmark
// compare against them.
namespace serial {
std::int64_t count_allowed_paths(const ArcLabelling& lab);
std::vector<std::int64_t> arc_utilizations(const ArcLabelling& lab);
}  // namespace serial

// { m : a->m->b allowed }, ascending. Throws invalid_pair when a == b.
std::vector<SwitchId> intermediates(const ArcLabelling& lab, SwitchId a, SwitchId b);

struct FairnessReport {
  bool fair = false;                  // every arc has the same utilization
  std::int64_t min_utilization = 0;
  std::int64_t max_utilization = 0;
  std::int64_t allowed_paths = 0;
  std::int64_t fair_path_count = 0;   // n(n-1)(n-2)/2
  bool count_matches = false;         // allowed_paths == fair_path_count
  bool implication_holds = false;     // fair -> count_matches
};

FairnessReport verify_fair_ordering_theorem(const ArcLabelling& lab);

// Text form: one "src dst label" line per arc, sorted by (src, dst).
void write_labelling(std::ostream& os, const ArcLabelling& lab);
// Reads the text form; n is inferred from the largest switch id. Throws
// malformed_ordering on missing/duplicate arcs or bad lines.
ArcLabelling read_labelling(std::istream& is);

}  // namespace fmnet
