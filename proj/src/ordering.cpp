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

#include "fmnet/ordering.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fmnet/errors.hpp"

namespace fmnet {

ArcLabelling ArcLabelling::srinr(int n) {
  if (n < 2) throw invalid_size("labelling needs n >= 2");
  ArcLabelling lab;
  lab.n_ = n;
  lab.labels_.assign(static_cast<size_t>(n) * n, 0);
  for (SwitchId i = 0; i < n; ++i)
    for (SwitchId j = 0; j < n; ++j) lab.labels_[static_cast<size_t>(i) * n + j] = srinr_distance(n, i, j);
  return lab;
}

ArcLabelling ArcLabelling::from_order(int n, const std::vector<Arc>& order) {
  std::vector<std::pair<Arc, int>> labels;
  labels.reserve(order.size());
  for (size_t pos = 0; pos < order.size(); ++pos) labels.push_back({order[pos], static_cast<int>(pos) + 1});
  return from_labels(n, labels);
}

ArcLabelling ArcLabelling::from_labels(int n, const std::vector<std::pair<Arc, int>>& labels) {
  if (n < 2) throw invalid_size("labelling needs n >= 2");
  const size_t arcs = static_cast<size_t>(n) * (n - 1);
  if (labels.size() != arcs)
    throw malformed_ordering("expected " + std::to_string(arcs) + " arcs, got " + std::to_string(labels.size()));
  ArcLabelling lab;
  lab.n_ = n;
  lab.labels_.assign(static_cast<size_t>(n) * n, 0);
  std::vector<char> seen(static_cast<size_t>(n) * n, 0);
  for (const auto& [arc, value] : labels) {
    if (arc.src < 0 || arc.dst < 0 || arc.src >= n || arc.dst >= n || arc.src == arc.dst)
      throw malformed_ordering("invalid arc (" + std::to_string(arc.src) + "," + std::to_string(arc.dst) + ")");
    const size_t idx = static_cast<size_t>(arc.src) * n + arc.dst;
    if (seen[idx]) throw malformed_ordering("duplicate arc (" + std::to_string(arc.src) + "," + std::to_string(arc.dst) + ")");
    seen[idx] = 1;
    lab.labels_[idx] = value;
  }
  return lab;
}

int ArcLabelling::label(SwitchId i, SwitchId j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw invalid_pair("switch id out of range");
  if (i == j) throw invalid_pair("no arc from a switch to itself");
  return raw(i, j);
}

bool allowed_2path(const ArcLabelling& lab, SwitchId s, SwitchId m, SwitchId d) {
  if (s == m || m == d || s == d) return false;
  return lab.raw(s, m) < lab.raw(m, d);
}

namespace {

std::int64_t allowed_from(const ArcLabelling& lab, SwitchId s) {
  const int n = lab.n();
  std::int64_t count = 0;
  for (SwitchId m = 0; m < n; ++m) {
    if (m == s) continue;
    const int first = lab.raw(s, m);
    for (SwitchId d = 0; d < n; ++d)
      if (d != s && d != m && first < lab.raw(m, d)) ++count;
  }
  return count;
}

// Adds, for every allowed s->m->d with fixed s, one use to arcs (s,m) and (m,d).
void utilization_from(const ArcLabelling& lab, SwitchId s, std::vector<std::int64_t>& util) {
  const int n = lab.n();
  for (SwitchId m = 0; m < n; ++m) {
    if (m == s) continue;
    const int first = lab.raw(s, m);
    for (SwitchId d = 0; d < n; ++d) {
      if (d != s && d != m && first < lab.raw(m, d)) {
        ++util[static_cast<size_t>(s) * n + m];
        ++util[static_cast<size_t>(m) * n + d];
      }
    }
  }
}

}  // namespace

namespace serial {

std::int64_t count_allowed_paths(const ArcLabelling& lab) {
  std::int64_t total = 0;
  for (SwitchId s = 0; s < lab.n(); ++s) total += allowed_from(lab, s);
  return total;
}

std::vector<std::int64_t> arc_utilizations(const ArcLabelling& lab) {
  std::vector<std::int64_t> util(static_cast<size_t>(lab.n()) * lab.n(), 0);
  for (SwitchId s = 0; s < lab.n(); ++s) utilization_from(lab, s, util);
  return util;
}

}  // namespace serial

std::int64_t count_allowed_paths(const ArcLabelling& lab) {
  const int n = lab.n();
  std::int64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (SwitchId s = 0; s < n; ++s) total += allowed_from(lab, s);
  return total;
}

std::vector<std::int64_t> arc_utilizations(const ArcLabelling& lab) {
  const int n = lab.n();
  const size_t cells = static_cast<size_t>(n) * n;
  std::vector<std::int64_t> util(cells, 0);
#pragma omp parallel
  {
    std::vector<std::int64_t> local(cells, 0);
#pragma omp for schedule(static) nowait
    for (SwitchId s = 0; s < n; ++s) utilization_from(lab, s, local);
#pragma omp critical
    for (size_t i = 0; i < cells; ++i) util[i] += local[i];
  }
  return util;
}

std::int64_t arc_utilization(const ArcLabelling& lab, const Arc& arc) {
  const SwitchId a = arc.src, b = arc.dst;
  lab.label(a, b);  // validates the arc
  std::int64_t s = 0;
  for (SwitchId x = 0; x < lab.n(); ++x) s += allowed_2path(lab, a, b, x) + allowed_2path(lab, x, a, b);
  return s;
}

std::vector<SwitchId> intermediates(const ArcLabelling& lab, SwitchId a, SwitchId b) {
  if (a == b) throw invalid_pair("intermediates need distinct source and destination");
  lab.label(a, b);
  std::vector<SwitchId> out;
  for (SwitchId m = 0; m < lab.n(); ++m)
    if (allowed_2path(lab, a, m, b)) out.push_back(m);
  return out;
}

FairnessReport verify_fair_ordering_theorem(const ArcLabelling& lab) {
  const int n = lab.n();
  const auto util = arc_utilizations(lab);
  FairnessReport r;
  bool first = true;
  for (SwitchId i = 0; i < n; ++i) {
    for (SwitchId j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto u = util[static_cast<size_t>(i) * n + j];
      if (first) {
        r.min_utilization = r.max_utilization = u;
        first = false;
      }
      r.min_utilization = std::min(r.min_utilization, u);
      r.max_utilization = std::max(r.max_utilization, u);
    }
  }
  r.fair = r.min_utilization == r.max_utilization;
  r.allowed_paths = count_allowed_paths(lab);
  r.fair_path_count = static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 2;
  r.count_matches = r.allowed_paths == r.fair_path_count;
  r.implication_holds = !r.fair || r.count_matches;
  return r;
}

void write_labelling(std::ostream& os, const ArcLabelling& lab) {
  for (SwitchId i = 0; i < lab.n(); ++i)
    for (SwitchId j = 0; j < lab.n(); ++j)
      if (i != j) os << i << ' ' << j << ' ' << lab.raw(i, j) << '\n';
}

ArcLabelling read_labelling(std::istream& is) {
  std::vector<std::pair<Arc, int>> entries;
  std::string line;
  int line_no = 0;
  int max_id = -1;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int src, dst, label;
    if (!(ls >> src)) continue;  // blank line
    if (!(ls >> dst >> label)) throw malformed_ordering("line " + std::to_string(line_no) + ": expected 'src dst label'");
    std::string extra;
    if (ls >> extra) throw malformed_ordering("line " + std::to_string(line_no) + ": trailing text");
    if (src < 0 || dst < 0) throw malformed_ordering("line " + std::to_string(line_no) + ": negative switch id");
    max_id = std::max({max_id, src, dst});
    entries.push_back({{src, dst}, label});
  }
  if (max_id < 1) throw malformed_ordering("labelling file lists no arcs");
  return ArcLabelling::from_labels(max_id + 1, entries);
}

}  // namespace fmnet
