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

#include <string>
#include <vector>

#include "fmnet/service.hpp"

namespace fmnet {

// Saturation estimate for TERA under a random switch permutation, in
// flits/cycle/server: 1 / (1 + 1/p), p being the main-degree fraction.
// Throws std::domain_error unless 0 < p <= 1.
double estimate_throughput(double p);

struct EstimatePoint {
  std::string service;
  int n = 0;
  double p = 0.0;
  double estimate = 0.0;
};

// One point per n, p counted exactly from the embedding built on K_n.
// Throws when the service cannot be embedded at some n.
std::vector<EstimatePoint> estimate_curve(const ServiceSpec& spec, const std::vector<int>& ns);

// The three inequalities behind the estimate, evaluated for one input.
// gamma terms are per-switch rates in units of full-rate links.
struct GammaBound {
  double gamma2_max = 0.0;       // ((n-1) - gamma1) / (1 + 1/p)
  double gamma2_max_alt = 0.0;   // (p(n-1) - p gamma1) / (1 + p), same value
  double gamma_max = 0.0;        // gamma1 + gamma2_max
  double gamma_closed = 0.0;     // (n-1)/(1+1/p) + gamma1/(1+p)
  double gamma_upper = 0.0;      // (n-1)/(1+1/p) + 1
  double main_load = 0.0;        // n (p gamma1 + (1+p) gamma2_max)
  double main_capacity = 0.0;    // p (n-1) n
  double per_server = 0.0;       // gamma_max / n
  double per_server_bound = 0.0; // 1/(1+1/p) + 1/n
};

// Throws std::domain_error for p outside (0,1], gamma1 outside [0,1] or n < 2.
GammaBound gamma_bound(int n, double p, double gamma1);

// True when every step of the chain holds within `tol`.
bool gamma_chain_holds(const GammaBound& b, double tol = 1e-9);

// |estimate - simulated| / simulated.
double relative_gap(double estimate, double simulated);

}  // namespace fmnet
