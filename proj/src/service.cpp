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

#include "fmnet/service.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cctype>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fmnet/errors.hpp"

namespace fmnet {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int parse_int(const std::string& s, const std::string& context) {
  try {
    size_t used = 0;
    const int v = std::stoi(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + s + "' in " + context);
  }
}

std::vector<std::string> split_args(const std::string& inner) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : inner) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::vector<int> mixed_radix(int value, const std::vector<int>& dims) {
  std::vector<int> c(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) {
    c[i] = value % dims[i];
    value /= dims[i];
  }
  return c;
}

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

ServiceSpec ServiceSpec::parse(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  const std::string head = trim(t.substr(0, open));
  std::vector<std::string> args;
  if (open != std::string::npos) {
    if (t.back() != ')') throw std::invalid_argument("unbalanced parentheses in service '" + text + "'");
    args = split_args(t.substr(open + 1, t.size() - open - 2));
  }
  ServiceSpec spec;
  auto read_dims = [&](ServiceSpec& s) {
    if (args.size() == 1 && args[0].rfind("d=", 0) == 0) {
      s.auto_dims = parse_int(args[0].substr(2), text);
      if (s.auto_dims < 1) throw std::invalid_argument("d must be >= 1 in '" + text + "'");
      return;
    }
    if (args.empty()) throw std::invalid_argument("missing dimensions in service '" + text + "'");
    for (const auto& a : args) {
      const int d = parse_int(a, text);
      if (d < 2) throw std::invalid_argument("dimension sizes must be >= 2 in '" + text + "'");
      s.dims.push_back(d);
    }
  };
  if (head == "path") {
    if (!args.empty()) throw std::invalid_argument("path takes no arguments");
    spec.kind = Kind::path;
  } else if (head == "hypercube") {
    if (!args.empty()) throw std::invalid_argument("hypercube takes no arguments");
    spec.kind = Kind::hypercube;
  } else if (head == "k_tree") {
    spec.kind = Kind::k_tree;
    if (args.size() != 1) throw std::invalid_argument("k_tree takes one arity argument");
    spec.k = parse_int(args[0].rfind("k=", 0) == 0 ? args[0].substr(2) : args[0], text);
    if (spec.k < 1) throw std::invalid_argument("k_tree arity must be >= 1");
  } else if (head == "d_mesh") {
    spec.kind = Kind::d_mesh;
    read_dims(spec);
  } else if (head == "hyperx") {
    spec.kind = Kind::hyperx;
    read_dims(spec);
  } else {
    throw std::invalid_argument("unknown service topology '" + head + "'");
  }
  return spec;
}

std::string ServiceSpec::to_string() const {
  std::ostringstream os;
  auto dims_str = [&]() {
    if (auto_dims > 0 && dims.empty()) {
      os << "(d=" << auto_dims << ")";
      return;
    }
    os << "(";
    for (size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
    os << ")";
  };
  switch (kind) {
    case Kind::path: os << "path"; break;
    case Kind::hypercube: os << "hypercube"; break;
    case Kind::k_tree: os << "k_tree(" << k << ")"; break;
    case Kind::d_mesh: os << "d_mesh"; dims_str(); break;
    case Kind::hyperx: os << "hyperx"; dims_str(); break;
    case Kind::custom: os << "custom"; break;
  }
  return os.str();
}

ServiceSpec ServiceSpec::resolved(int n) const {
  ServiceSpec s = *this;
  if (s.auto_dims > 0 && s.dims.empty()) s.dims = balanced_factorization(n, s.auto_dims);
  return s;
}

std::vector<int> balanced_factorization(int n, int d) {
  if (n < 2) throw invalid_size("cannot factor n < 2");
  if (d < 1) throw invalid_size("need at least one factor");
  std::vector<int> best;
  int best_spread = std::numeric_limits<int>::max();
  std::vector<int> cur;
  // Non-decreasing factors, each >= 2, product exactly n.
  std::function<void(int, int)> search = [&](int rest, int min_factor) {
    if (static_cast<int>(cur.size()) == d - 1) {
      if (rest >= min_factor) {
        cur.push_back(rest);
        const int spread = cur.back() - cur.front();
        if (spread < best_spread) {
          best_spread = spread;
          best = cur;
        }
        cur.pop_back();
      }
      return;
    }
    for (int f = min_factor; f * f <= rest || f <= rest; ++f) {
      if (rest % f != 0) continue;
      if (rest / f < f) break;
      cur.push_back(f);
      search(rest / f, f);
      cur.pop_back();
    }
  };
  search(n, 2);
  if (best.empty()) throw embedding_mismatch("cannot split " + std::to_string(n) + " switches into " + std::to_string(d) + " dimensions of size >= 2");
  return best;
}

ServiceEmbedding ServiceEmbedding::embed(const Topology& base, const ServiceSpec& raw_spec) {
  if (!base.is_complete()) throw embedding_mismatch("service embedding requires a complete-graph base");
  const int n = base.switches();
  ServiceSpec spec = raw_spec.resolved(n);
  ServiceEmbedding e;
  e.base_ = base;
  e.role_.assign(static_cast<size_t>(n) * n, 0);
  e.next_.assign(static_cast<size_t>(n) * n, 0);
  e.coords_.resize(n);

  std::function<bool(SwitchId, SwitchId)> adjacent;
  std::function<SwitchId(SwitchId, SwitchId)> next;

  auto grid = [&](const std::vector<int>& dims, bool unit_steps) {
    if (product(dims) != n)
      throw embedding_mismatch(spec.to_string() + " has " + std::to_string(product(dims)) + " nodes but the full-mesh has " + std::to_string(n));
    for (SwitchId s = 0; s < n; ++s) e.coords_[s] = mixed_radix(s, dims);
    adjacent = [&e, unit_steps](SwitchId a, SwitchId b) {
      const auto& ca = e.coords_[a];
      const auto& cb = e.coords_[b];
      int diffs = 0;
      for (size_t i = 0; i < ca.size(); ++i) {
        if (ca[i] == cb[i]) continue;
        if (++diffs > 1) return false;
        if (unit_steps && std::abs(ca[i] - cb[i]) != 1) return false;
      }
      return diffs == 1;
    };
    next = [&e, dims, unit_steps](SwitchId cur, SwitchId dst) {
      const auto& cc = e.coords_[cur];
      const auto& cd = e.coords_[dst];
      int stride = 1;
      for (size_t i = 0; i < dims.size(); ++i) {
        if (cc[i] != cd[i]) {
          const int step = unit_steps ? (cd[i] > cc[i] ? 1 : -1) : cd[i] - cc[i];
          return cur + step * stride;
        }
        stride *= dims[i];
      }
      return cur;
    };
  };

  switch (spec.kind) {
    case ServiceSpec::Kind::path:
      spec.dims = {n};
      grid(spec.dims, true);
      break;
    case ServiceSpec::Kind::d_mesh:
      grid(spec.dims, true);
      break;
    case ServiceSpec::Kind::hyperx:
      grid(spec.dims, false);
      break;
    case ServiceSpec::Kind::hypercube: {
      if (!is_power_of_two(n) || n < 2) throw embedding_mismatch("hypercube needs a power-of-two switch count, got " + std::to_string(n));
      spec.dims.assign(static_cast<size_t>(std::countr_zero(static_cast<unsigned>(n))), 2);
      grid(spec.dims, false);
      break;
    }
    case ServiceSpec::Kind::k_tree: {
      const int k = spec.k;
      for (SwitchId s = 0; s < n; ++s) e.coords_[s] = {s};
      auto parent = [k](SwitchId s) { return (s - 1) / k; };
      adjacent = [parent](SwitchId a, SwitchId b) { return (a > 0 && parent(a) == b) || (b > 0 && parent(b) == a); };
      next = [parent](SwitchId cur, SwitchId dst) {
        if (cur == dst) return cur;
        // Climb from dst; if we meet cur, step down toward dst.
        SwitchId child = dst;
        SwitchId up = dst;
        while (up > cur) {
          child = up;
          up = parent(up);
        }
        if (up == cur) return child;
        return parent(cur);
      };
      break;
    }
    case ServiceSpec::Kind::custom:
      throw embedding_mismatch("custom embeddings are built with ServiceEmbedding::custom");
  }

  for (SwitchId a = 0; a < n; ++a)
    for (SwitchId b = 0; b < n; ++b)
      if (a != b && adjacent(a, b)) e.role_[static_cast<size_t>(a) * n + b] = 1;
  for (SwitchId a = 0; a < n; ++a)
    for (SwitchId b = 0; b < n; ++b) e.next_[static_cast<size_t>(a) * n + b] = next(a, b);

  e.spec_ = spec;
  e.label_ = spec.to_string();
  e.finalize_routes();
  if (!e.service_connected()) throw invariant_violation("service topology " + e.label_ + " does not span the full-mesh");
  return e;
}

ServiceEmbedding ServiceEmbedding::custom(const Topology& base, const std::vector<Arc>& service_arcs,
                                          std::vector<SwitchId> next_hop, std::string label) {
  if (!base.is_complete()) throw embedding_mismatch("service embedding requires a complete-graph base");
  const int n = base.switches();
  if (next_hop.size() != static_cast<size_t>(n) * n) throw embedding_mismatch("next-hop table must be n*n");
  ServiceEmbedding e;
  e.base_ = base;
  e.spec_.kind = ServiceSpec::Kind::custom;
  e.label_ = std::move(label);
  e.role_.assign(static_cast<size_t>(n) * n, 0);
  e.coords_.resize(n);
  for (SwitchId s = 0; s < n; ++s) e.coords_[s] = {s};
  for (const Arc& a : service_arcs) {
    if (a.src == a.dst || a.src < 0 || a.dst < 0 || a.src >= n || a.dst >= n) throw embedding_mismatch("bad service arc");
    e.role_[static_cast<size_t>(a.src) * n + a.dst] = 1;
  }
  e.next_ = std::move(next_hop);
  e.finalize_routes();
  return e;
}

void ServiceEmbedding::finalize_routes() {
  const int n = switches();
  arc_role_.assign(base_.arc_count(), 0);
  service_degree_.assign(n, 0);
  service_arc_count_ = 0;
  for (int id = 0; id < base_.arc_count(); ++id) {
    const Arc& a = base_.arc(id);
    if (is_service(a.src, a.dst)) {
      arc_role_[id] = 1;
      ++service_degree_[a.src];
      ++service_arc_count_;
    }
  }
  dist_.assign(static_cast<size_t>(n) * n, 0);
  diameter_ = 0;
  for (SwitchId s = 0; s < n; ++s) {
    for (SwitchId d = 0; d < n; ++d) {
      int hops = 0;
      SwitchId cur = s;
      while (cur != d) {
        const SwitchId nx = service_next(cur, d);
        if (nx == cur || nx < 0 || nx >= n || !is_service(cur, nx))
          throw invariant_violation("service routing of " + label_ + " leaves the service topology at " + std::to_string(cur) + "->" + std::to_string(d));
        cur = nx;
        if (++hops > n) throw invariant_violation("service routing of " + label_ + " loops");
      }
      dist_[static_cast<size_t>(s) * n + d] = hops;
      diameter_ = std::max(diameter_, hops);
    }
  }
}

bool ServiceEmbedding::service_connected() const {
  const int n = switches();
  for (SwitchId s = 0; s < n; ++s)
    if (service_degree_[s] == 0) return false;
  std::vector<char> seen(n, 0);
  std::deque<SwitchId> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const SwitchId u = queue.front();
    queue.pop_front();
    for (SwitchId v = 0; v < n; ++v) {
      if (!seen[v] && (is_service(u, v) || is_service(v, u))) {
        seen[v] = 1;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == n;
}

std::vector<Arc> ServiceEmbedding::service_arcs() const {
  std::vector<Arc> out;
  for (int id = 0; id < base_.arc_count(); ++id)
    if (arc_role_[id]) out.push_back(base_.arc(id));
  return out;
}

std::vector<Arc> ServiceEmbedding::main_arcs() const {
  std::vector<Arc> out;
  for (int id = 0; id < base_.arc_count(); ++id)
    if (!arc_role_[id]) out.push_back(base_.arc(id));
  return out;
}

double main_degree_ratio(const ServiceEmbedding& emb) {
  const int n = emb.switches();
  const int main_arcs = emb.base().arc_count() - emb.service_arc_count();
  if (main_arcs <= 0) throw embedding_mismatch("main topology is empty: the service topology uses every link");
  const double avg_main_degree = static_cast<double>(main_arcs) / n;
  return avg_main_degree / (n - 1);
}

int max_hop_bound(const ServiceEmbedding& emb) { return 1 + emb.service_diameter(); }

nlohmann::json to_json(const Topology& topo) {
  nlohmann::json j;
  j["switches"] = topo.switches();
  j["servers_per_switch"] = topo.servers_per_switch();
  if (!topo.hyperx_dims().empty()) j["hyperx_dims"] = topo.hyperx_dims();
  auto& arcs = j["arcs"] = nlohmann::json::array();
  for (const Arc& a : topo.arcs()) arcs.push_back({{"src", a.src}, {"dst", a.dst}, {"role", "main"}});
  return j;
}

nlohmann::json to_json(const ServiceEmbedding& emb) {
  nlohmann::json j = to_json(emb.base());
  j["service"] = emb.label();
  j["service_arcs"] = emb.service_arc_count();
  j["service_diameter"] = emb.service_diameter();
  auto& arcs = j["arcs"];
  for (size_t i = 0; i < arcs.size(); ++i)
    if (emb.is_service_arc(static_cast<int>(i))) arcs[i]["role"] = "service";
  return j;
}

}  // namespace fmnet
