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

#include "fmnet/verify.hpp"

#include <algorithm>
#include <sstream>

#include "fmnet/deadlock.hpp"
#include "fmnet/errors.hpp"
#include "fmnet/ordering.hpp"
#include "fmnet/service.hpp"

namespace fmnet {

bool VerifyReport::pass() const {
  const bool checked = std::any_of(lines.begin(), lines.end(), [](const VerifyLine& l) { return !l.skipped; });
  return checked && std::all_of(lines.begin(), lines.end(), [](const VerifyLine& l) { return l.pass || l.skipped; });
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto bad = [&]() { return config_error("range", "expected 'a..b' or 'n', got '" + text + "'"); };
  int lo = 0, hi = 0;
  try {
    const auto dots = text.find("..");
    size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text, &used);
      if (used != text.size()) throw bad();
    } else {
      const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      lo = std::stoi(a, &used);
      if (used != a.size()) throw bad();
      hi = std::stoi(b, &used);
      if (used != b.size()) throw bad();
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (lo > hi) throw config_error("range", "empty range '" + text + "'");
  return {lo, hi};
}

namespace {

std::string describe_cycle(const std::vector<Channel>& cycle, const Topology& topo, int vcs) {
  std::ostringstream os;
  os << "cycle:";
  for (const Channel& c : cycle) {
    const Arc& a = topo.arc(c.arc);
    os << ' ' << a.src << "->" << a.dst;
    if (vcs > 1) os << "/vc" << c.vc;
  }
  return os.str();
}

VerifyLine theorem1(int n) {
  VerifyLine l{n, false, false, {}};
  const auto rep = verify_fair_ordering_theorem(ArcLabelling::srinr(n));
  const bool util_ok = rep.min_utilization == n - 2 && rep.max_utilization == n - 2;
  l.pass = rep.fair && rep.count_matches && util_ok;
  std::ostringstream os;
  os << "paths=" << rep.allowed_paths << " expected=" << rep.fair_path_count << " utilization=" << rep.min_utilization
     << ".." << rep.max_utilization;
  l.detail = os.str();
  return l;
}

VerifyLine claim(int n) {
  VerifyLine l{n, true, false, {}};
  if (n % 2 != 0 || n < 4) {
    l.skipped = true;
    l.pass = false;
    l.detail = "the claim covers even n >= 4";
    return l;
  }
  const auto lab = ArcLabelling::srinr(n);
  const int same = (n - 4) / 2, diff = (n - 2) / 2;
  int lo = n;
  for (int a = 0; a < n && l.pass; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const int k = static_cast<int>(intermediates(lab, a, b).size());
      lo = std::min(lo, k);
      const int want = (a % 2 == b % 2) ? same : diff;
      if (k != want) {
        l.pass = false;
        l.detail = "pair (" + std::to_string(a) + "," + std::to_string(b) + ") has " + std::to_string(k) +
                   " intermediates, expected " + std::to_string(want);
        break;
      }
    }
  if (l.pass) {
    l.pass = lo == same;
    l.detail = "min=" + std::to_string(lo) + " same_parity=" + std::to_string(same) +
               " different_parity=" + std::to_string(diff);
  }
  return l;
}

VerifyLine cdg(const std::string& routing_spec, int n) {
  VerifyLine l{n, false, false, {}};
  const Topology topo = Topology::complete_graph(n, 1);
  const auto routing = make_routing(routing_spec, topo);
  const auto g = build_cdg(*routing);
  const auto cycle = find_cycle(g);
  l.pass = !cycle;
  std::ostringstream os;
  os << routing->name() << " vcs=" << routing->vc_count() << " channels=" << g.used_channels()
     << " dependencies=" << g.edge_count();
  if (cycle) os << ' ' << describe_cycle(*cycle, topo, g.vcs());
  l.detail = os.str();
  return l;
}

VerifyLine escape(const std::string& service, int n) {
  VerifyLine l{n, false, false, {}};
  const Topology topo = Topology::complete_graph(n, 1);
  const auto emb = ServiceEmbedding::embed(topo, ServiceSpec::parse(service).resolved(n));
  const TeraRouting tera(emb, kDefaultPenalty);
  const auto rep = verify_escape(tera);
  l.pass = rep.deadlock_free();
  std::ostringstream os;
  os << tera.name() << " states=" << rep.states_checked << " escape_acyclic=" << rep.escape_acyclic
     << " escape_always_available=" << rep.escape_always_available;
  if (!rep.escape_cycle.empty()) os << ' ' << describe_cycle(rep.escape_cycle, topo, 1);
  l.detail = os.str();
  return l;
}

}  // namespace

VerifyReport verify_subject(const std::string& subject, int n_lo, int n_hi) {
  VerifyReport rep;
  rep.subject = subject;
  const auto colon = subject.find(':');
  const std::string head = subject.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : subject.substr(colon + 1);
  if (n_lo < 2) throw config_error("range", "switch counts start at 2");
  for (int n = n_lo; n <= n_hi; ++n) {
    try {
      if (head == "theorem1" && arg.empty()) {
        if (n < 3) continue;
        rep.lines.push_back(theorem1(n));
      } else if (head == "claim" && arg.empty()) {
        rep.lines.push_back(claim(n));
      } else if (head == "cdg" && !arg.empty()) {
        rep.lines.push_back(cdg(arg, n));
      } else if (head == "escape" && !arg.empty()) {
        rep.lines.push_back(escape(arg, n));
      } else {
        throw config_error("subject", "expected theorem1, claim, cdg:<routing> or escape:<service>, got '" +
                                          subject + "'");
      }
    } catch (const config_error&) {
      throw;
    } catch (const std::invalid_argument& e) {
      // The service or routing does not fit this n.
      rep.lines.push_back({n, false, true, e.what()});
    }
  }
  return rep;
}

}  // namespace fmnet
