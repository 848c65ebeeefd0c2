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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmnet/errors.hpp"
#include "fmnet/experiment.hpp"

namespace fmnet {
namespace {

const char* kSmall = R"js({
  "name": "small",
  "topology": {"kind": "complete", "switches": 8, "servers_per_switch": 2},
  "routings": ["min", "tera(service=hypercube)"],
  "traffic": {"mode": "bernoulli", "pattern": "uniform", "loads": [0.2, 0.4]},
  "cycles": {"warmup": 100, "measure": 400},
  "seeds": [1, 2],
  "profiles": {"ci": {"cycles": {"measure": 200}, "seeds": [7]}}
})js";

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const config_error& e) {
    return e.field();
  }
  return "<none>";
}

TEST(Config, RoundTripAndDefaults) {
  const ExperimentConfig c = parse_config(kSmall);
  EXPECT_EQ(c.routings.size(), 2u);
  EXPECT_EQ(c.engine.packet_flits, 16);
  EXPECT_EQ(c.cycles.effective_warmup(), 100);
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.hash(), c.hash());
  ExperimentConfig d = c;
  d.cycles.warmup = -1;
  EXPECT_EQ(d.cycles.effective_warmup(), 133);
}

TEST(Config, HashIgnoresSeedsAndKeyOrder) {
  const ExperimentConfig a = parse_config(kSmall);
  ExperimentConfig b = a;
  b.seeds = {99};
  EXPECT_EQ(a.hash(), b.hash());
  b.traffic.loads = {0.3};
  EXPECT_NE(a.hash(), b.hash());
  const std::string reordered = R"js({"seeds":[1,2],"cycles":{"measure":400,"warmup":100},
    "traffic":{"loads":[0.2,0.4],"pattern":"uniform","mode":"bernoulli"},
    "routings":["min","tera(service=hypercube)"],
    "topology":{"servers_per_switch":2,"switches":8,"kind":"complete"},"name":"small"})js";
  EXPECT_EQ(parse_config(reordered).hash(), a.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Config, Profiles) {
  const ExperimentConfig ci = parse_config(kSmall, "ci");
  EXPECT_EQ(ci.cycles.measure, 200);
  EXPECT_EQ(ci.cycles.warmup, 100);  // untouched by the patch
  EXPECT_EQ(ci.seeds, (std::vector<std::uint64_t>{7}));
  EXPECT_THROW(parse_config(kSmall, "full"), config_error);
  EXPECT_EQ(parse_config(R"js({"routings":["min"]})js", "full").routings.front(), "min");
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of(R"js({"topology":{"switches":1}})js"), "topology.switches");
  EXPECT_EQ(field_of(R"js({"topology":{"switches":"8"}})js"), "topology.switches");
  EXPECT_EQ(field_of(R"js({"bogus":1})js"), "bogus");
  EXPECT_EQ(field_of(R"js({"routings":["min","warp"]})js"), "routings[1]");
  EXPECT_EQ(field_of(R"js({"traffic":{"loads":[0.5, 1.5]}})js"), "traffic.loads[1]");
  EXPECT_EQ(field_of(R"js({"traffic":{"mode":"kernel","kernel":"allreduce"},"topology":{"switches":3,"servers_per_switch":1}})js"),
            "traffic.kernel");
  EXPECT_EQ(field_of(R"js({"engine":{"speedup":0}})js"), "engine.speedup");
  EXPECT_EQ(field_of("{not json"), "config");
  EXPECT_THROW(load_config("/nonexistent/x.json"), config_error);
}

TEST(Sweep, JobOrderAndDeterminism) {
  ExperimentConfig c = parse_config(kSmall);
  const auto jobs = expand_jobs(c);
  ASSERT_EQ(jobs.size(), 8u);
  EXPECT_EQ(jobs[1].seed, 2u);
  EXPECT_EQ(jobs[2].load, 1);
  EXPECT_EQ(jobs[4].routing, 1);
  const auto par = run_sweep(c, 3);
  const auto ser = serial::run_sweep(c);
  ASSERT_EQ(par.size(), ser.size());
  for (size_t i = 0; i < par.size(); ++i) EXPECT_EQ(to_csv(par[i].row), to_csv(ser[i].row));
  EXPECT_EQ(par[0].row.routing, "MIN");
  EXPECT_EQ(par[4].row.routing, "TERA-HC");
  std::stringstream ss;
  write_results(ss, par);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, csv_header());
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST(Sweep, KernelRowsAndPhases) {
  const ExperimentConfig c = parse_config(R"js({
    "topology": {"switches": 4, "servers_per_switch": 2},
    "routings": ["omniwar"],
    "traffic": {"mode": "kernel", "kernel": "allreduce", "allreduce_base_packets": 8}})js");
  const auto res = run_sweep(c, 1);
  ASSERT_EQ(res.size(), 1u);
  EXPECT_EQ(res[0].row.pattern, "allreduce/linear");
  EXPECT_EQ(res[0].row.m.offered, 0.0);
  EXPECT_EQ(res[0].phase_cycles.size(), 6u);
  EXPECT_GT(res[0].row.m.cycles_to_finish, 0);
  std::stringstream ss;
  write_phases(ss, res);
  std::string line;
  int rows = -1;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(Bundled, EveryConfigLoadsInBothProfiles) {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(FMNET_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    std::stringstream ss;
    ss << std::ifstream(e.path()).rdbuf();
    for (const std::string p : {"ci", "full"}) {
      if (e.path().stem() == "estimate_services")
        EXPECT_NO_THROW(parse_estimate_config(ss.str(), p)) << e.path();
      else
        EXPECT_NO_THROW(parse_config(ss.str(), p)) << e.path() << ' ' << p;
    }
    ++n;
  }
  EXPECT_GE(n, 20);
}

}  // namespace
}  // namespace fmnet
