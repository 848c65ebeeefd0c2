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

#include "fmnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmnet {

double estimate_throughput(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("main-degree fraction must lie in (0, 1]");
  return 1.0 / (1.0 + 1.0 / p);
}

std::vector<EstimatePoint> estimate_curve(const ServiceSpec& spec, const std::vector<int>& ns) {
  std::vector<EstimatePoint> out;
  out.reserve(ns.size());
  for (int n : ns) {
    const Topology k = Topology::complete_graph(n, 1);
    const ServiceEmbedding emb = ServiceEmbedding::embed(k, spec.resolved(n));
    EstimatePoint pt;
    pt.service = spec.to_string();
    pt.n = n;
    pt.p = main_degree_ratio(emb);
    pt.estimate = estimate_throughput(pt.p);
    out.push_back(pt);
  }
  return out;
}

GammaBound gamma_bound(int n, double p, double gamma1) {
  if (n < 2) throw std::domain_error("need at least two switches");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("main-degree fraction must lie in (0, 1]");
  if (!(gamma1 >= 0.0 && gamma1 <= 1.0)) throw std::domain_error("one-hop rate must lie in [0, 1]");
  const double links = n - 1;
  GammaBound b;
  b.gamma2_max = (links - gamma1) / (1.0 + 1.0 / p);
  b.gamma2_max_alt = (p * links - p * gamma1) / (1.0 + p);
  b.gamma_max = gamma1 + b.gamma2_max;
  b.gamma_closed = links / (1.0 + 1.0 / p) + gamma1 / (1.0 + p);
  b.gamma_upper = links / (1.0 + 1.0 / p) + 1.0;
  b.main_load = n * (p * gamma1 + (1.0 + p) * b.gamma2_max);
  b.main_capacity = p * links * n;
  b.per_server = b.gamma_max / n;
  b.per_server_bound = estimate_throughput(p) + 1.0 / n;
  return b;
}

bool gamma_chain_holds(const GammaBound& b, double tol) {
  const auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); };
  // gamma2 at its maximum fills the main links exactly.
  return close(b.main_load, b.main_capacity) && close(b.gamma2_max, b.gamma2_max_alt) &&
         close(b.gamma_max, b.gamma_closed) && b.gamma_closed <= b.gamma_upper + tol &&
         b.per_server <= b.per_server_bound + tol;
}

double relative_gap(double estimate, double simulated) {
  if (simulated <= 0.0) throw std::domain_error("simulated throughput must be positive");
  return std::abs(estimate - simulated) / simulated;
}

}  // namespace fmnet
