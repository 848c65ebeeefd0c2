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

// Serial vs OpenMP timings for the hot loops: ordering counts, arc
// utilizations and a small parameter sweep.

#include <benchmark/benchmark.h>

#include "fmnet/experiment.hpp"
#include "fmnet/ordering.hpp"

namespace {

using namespace fmnet;

void bm_count_serial(benchmark::State& st) {
  const auto lab = ArcLabelling::srinr(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::count_allowed_paths(lab));
}

void bm_count_parallel(benchmark::State& st) {
  const auto lab = ArcLabelling::srinr(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(count_allowed_paths(lab));
}

void bm_util_serial(benchmark::State& st) {
  const auto lab = ArcLabelling::srinr(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::arc_utilizations(lab));
}

void bm_util_parallel(benchmark::State& st) {
  const auto lab = ArcLabelling::srinr(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(arc_utilizations(lab));
}

ExperimentConfig sweep_config() {
  return parse_config(R"js({
    "topology": {"switches": 16, "servers_per_switch": 4},
    "routings": ["min", "omniwar", "tera(service=hyperx(d=2))"],
    "traffic": {"mode": "bernoulli", "pattern": "uniform", "loads": [0.2, 0.4]},
    "cycles": {"warmup": 200, "measure": 1000},
    "seeds": [1, 2]})js");
}

void bm_sweep_serial(benchmark::State& st) {
  const auto cfg = sweep_config();
  for (auto _ : st) benchmark::DoNotOptimize(serial::run_sweep(cfg));
}

void bm_sweep_parallel(benchmark::State& st) {
  const auto cfg = sweep_config();
  for (auto _ : st) benchmark::DoNotOptimize(run_sweep(cfg, static_cast<int>(st.range(0))));
}

BENCHMARK(bm_count_serial)->Arg(64)->Arg(256);
BENCHMARK(bm_count_parallel)->Arg(64)->Arg(256);
BENCHMARK(bm_util_serial)->Arg(64)->Arg(256);
BENCHMARK(bm_util_parallel)->Arg(64)->Arg(256);
BENCHMARK(bm_sweep_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sweep_parallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
