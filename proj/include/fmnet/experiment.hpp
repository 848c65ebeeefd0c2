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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fmnet/engine.hpp"
#include "fmnet/metrics.hpp"

namespace fmnet {

struct TopologyConfig {
  std::string kind = "complete";  // complete | hyperx
  int switches = 16;              // complete only
  std::vector<int> dims;          // hyperx only
  int servers_per_switch = 16;

  Topology build() const;
};

struct TrafficConfig {
  std::string mode = "bernoulli";  // bernoulli | fixed_burst | kernel
  std::string pattern = "uniform"; // bernoulli and fixed_burst
  std::vector<double> loads{0.1};  // bernoulli
  int packets_per_server = 1250;   // fixed_burst
  std::string kernel;              // kernel
  std::string mapping = "linear";  // kernel
  KernelOptions kernel_options;
};

struct CycleConfig {
  std::int64_t warmup = -1;  // -1: a third of `measure`, i.e. a quarter of the run
  std::int64_t measure = 80000;
  std::int64_t max = 100000000;  // fixed_burst and kernel abort limit

  std::int64_t effective_warmup() const { return warmup >= 0 ? warmup : measure / 3; }
};

struct ExperimentConfig {
  std::string name;
  TopologyConfig topology;
  std::vector<std::string> routings{"min"};
  TrafficConfig traffic;
  CycleConfig cycles;
  EngineParams engine;
  std::vector<std::uint64_t> seeds{1};

  // Every field, with defaults filled in. Profiles are not part of it.
  nlohmann::json to_json() const;
  // Strict: unknown keys and wrong types raise config_error naming the field.
  static ExperimentConfig from_json(const nlohmann::json& j);

  // FNV-1a over the canonical JSON of everything except the seeds, as 16 hex
  // digits. Equal configs hash equally regardless of key order in the file.
  std::string hash() const;
};

// Parses text, then merge-patches profiles[profile] over the base. A file
// without a "profiles" object is used as written; one that has profiles but
// not the requested one is an error.
ExperimentConfig parse_config(const std::string& text, const std::string& profile = "");
ExperimentConfig load_config(const std::string& path, const std::string& profile = "");

// Estimate-curve bundle: services crossed with switch counts.
struct EstimateConfig {
  std::string name;
  std::vector<std::string> services{"path", "hypercube", "hyperx(d=2)", "hyperx(d=3)"};
  std::vector<int> switches{16, 32, 64, 128, 256};

  nlohmann::json to_json() const;
  static EstimateConfig from_json(const nlohmann::json& j);
};

EstimateConfig parse_estimate_config(const std::string& text, const std::string& profile = "");

// One simulation: a routing, a load point (Bernoulli only) and a seed.
struct Job {
  int routing = 0;
  int load = 0;
  std::uint64_t seed = 1;
};

// Routing-major, then load, then seed; this is also the output order.
std::vector<Job> expand_jobs(const ExperimentConfig& cfg);

struct JobResult {
  ResultRow row;
  std::vector<std::int64_t> phase_cycles;
};

// Runs one job. `trace` receives the per-packet CSV when non-null.
JobResult run_job(const ExperimentConfig& cfg, const Job& job, std::ostream* trace = nullptr);

// All jobs on `workers` OpenMP threads (<= 0: runtime default). Results come
// back in expand_jobs order whatever the scheduling. The first failing job,
// in that order, has its exception rethrown after all workers stop.
std::vector<JobResult> run_sweep(const ExperimentConfig& cfg, int workers);

namespace serial {
std::vector<JobResult> run_sweep(const ExperimentConfig& cfg);
}  // namespace serial

// "pattern" column: the pattern name, or kernel/mapping for kernel runs.
std::string pattern_label(const ExperimentConfig& cfg);

void write_results(std::ostream& os, const std::vector<JobResult>& results);
// config_hash,seed,routing,pattern,phase,cycle; kernel runs only.
void write_phases(std::ostream& os, const std::vector<JobResult>& results);

}  // namespace fmnet
