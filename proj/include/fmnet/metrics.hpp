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

namespace fmnet {

// (sum x)^2 / (n * sum x^2). Throws std::invalid_argument for an empty or
// all-zero vector or a negative entry.
double jain_index(const std::vector<double>& x);

// Relative frequency of each hop count; the last bucket collects everything
// at or above buckets-1. Throws std::invalid_argument when `hops` is empty.
std::vector<double> hop_distribution(const std::vector<int>& hops, int buckets = 5);
// Same, from a histogram (index = hop count).
std::vector<double> hop_distribution_from_histogram(const std::vector<std::int64_t>& histogram, int buckets = 5);

// Nearest-rank percentile: the ceil(p * N)-th smallest sample.
// Throws std::invalid_argument for empty samples or p outside (0, 1].
double nearest_rank(const std::vector<double>& sorted_samples, double p);
std::vector<double> latency_percentiles(std::vector<double> samples, const std::vector<double>& ps);

struct UtilizationSplit {
  double main = 0.0;
  std::optional<double> service;  // empty when no arc is tagged as service
};

// Mean busy fraction per arc class. `roles[a]` nonzero marks a service arc;
// an empty roles vector means every arc is main.
UtilizationSplit link_utilization_split(const std::vector<std::int64_t>& busy_cycles,
                                        const std::vector<std::uint8_t>& roles, std::int64_t cycles);

// Summary of one simulation run.
struct RunMetrics {
  double offered = 0.0;   // flits/cycle/server
  double accepted = 0.0;  // flits/cycle/server
  double mean_latency = 0.0;
  double p99 = 0.0;
  double p999 = 0.0;
  double p9999 = 0.0;
  double jain = 0.0;
  std::vector<double> hops;  // buckets 0..4, last one is ">= 4"
  double util_main = 0.0;
  std::optional<double> util_service;
  std::int64_t cycles_to_finish = -1;  // fixed-burst and kernel runs
  std::int64_t packets_delivered = 0;
  int max_hops_seen = 0;
  std::vector<std::int64_t> phase_cycles;  // kernel runs: cycle each phase finished everywhere
};

// Raw counters filled in by the engine.
class MetricsAccumulator {
 public:
  MetricsAccumulator(int servers, int arcs, std::int64_t window_begin, std::int64_t window_end);

  bool in_window(std::int64_t cycle) const { return cycle >= begin_ && cycle < end_; }
  std::int64_t window_begin() const { return begin_; }
  std::int64_t window_end() const { return end_; }

  void on_injected_flit(int server, std::int64_t cycle) {
    if (in_window(cycle)) ++injected_[server];
  }
  void on_ejected_flit(std::int64_t cycle) {
    if (in_window(cycle)) ++ejected_;
  }
  void on_link_flit(int arc, std::int64_t cycle) {
    if (in_window(cycle)) ++busy_[arc];
  }
  void on_delivered(std::int64_t created, std::int64_t delivered, int hops);

  // Collapses the window to [begin, end) as actually simulated (kernel and
  // burst runs end when the work does).
  void close_window(std::int64_t end) { end_ = end; }

  RunMetrics summarize(double offered, const std::vector<std::uint8_t>& arc_roles) const;

  const std::vector<std::int64_t>& injected_flits() const { return injected_; }
  const std::vector<std::int64_t>& busy_cycles() const { return busy_; }
  const std::vector<double>& latencies() const { return latency_; }
  std::int64_t ejected_flits() const { return ejected_; }

 private:
  int servers_;
  std::int64_t begin_, end_;
  std::vector<std::int64_t> injected_;
  std::vector<std::int64_t> busy_;
  std::vector<double> latency_;
  std::vector<std::int64_t> hop_hist_;
  std::int64_t ejected_ = 0;
  std::int64_t delivered_ = 0;
  int max_hops_ = 0;
};

// One line of the results CSV.
struct ResultRow {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string routing;
  std::string pattern;
  RunMetrics m;
};

std::string csv_header();
std::string to_csv(const ResultRow& row);
// Parses a line written by to_csv (used by determinism checks and tests).
ResultRow parse_csv_row(const std::string& line);

}  // namespace fmnet
