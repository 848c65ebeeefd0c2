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

// fmnet: experiment runner and verification front end.
//
// Exit codes: 0 ok, 2 config error, 3 invariant violation (including a failed
// verify), 4 deadlock detected, 1 anything else.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "fmnet/analysis.hpp"
#include "fmnet/deadlock.hpp"
#include "fmnet/errors.hpp"
#include "fmnet/experiment.hpp"
#include "fmnet/ordering.hpp"
#include "fmnet/service.hpp"
#include "fmnet/verify.hpp"

namespace {

using namespace fmnet;

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kInvariant = 3, kDeadlock = 4 };

struct Common {
  std::string config;
  std::string profile = "full";
  int seeds = 0;
  int workers = 0;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "experiment config (JSON)")->required();
  app->add_option("--profile", c.profile, "profile to apply")->check(CLI::IsMember({"ci", "full", "none"}));
  app->add_option("--seeds", c.seeds, "run this many seeds, counting up from the config's first one")
      ->check(CLI::PositiveNumber);
  app->add_option("--workers", c.workers, "parallel simulations (default: all cores)")->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "results CSV (default: stdout)");
}

ExperimentConfig load_with_overrides(const Common& c) {
  ExperimentConfig cfg = load_config(c.config, c.profile == "none" ? "" : c.profile);
  if (c.seeds > 0) {
    const std::uint64_t base = cfg.seeds.front();
    cfg.seeds.clear();
    for (int k = 0; k < c.seeds; ++k) cfg.seeds.push_back(base + static_cast<std::uint64_t>(k));
  }
  return cfg;
}

// Opens `path` for writing, or hands back stdout for an empty path.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw config_error("out", "cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? static_cast<std::ostream&>(*file_) : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string phases_path(const std::string& out) {
  const auto dot = out.rfind(".csv");
  return (dot != std::string::npos && dot + 4 == out.size() ? out.substr(0, dot) : out) + ".phases.csv";
}

void emit(const Common& c, const ExperimentConfig& cfg, const std::vector<JobResult>& results) {
  Output out(c.out);
  write_results(out.stream(), results);
  if (cfg.traffic.mode == "kernel" && !c.out.empty()) {
    Output ph(phases_path(c.out));
    write_phases(ph.stream(), results);
  }
}

int cmd_run(const Common& c, const std::string& routing, double load, const std::string& trace) {
  ExperimentConfig cfg = load_with_overrides(c);
  if (!routing.empty()) cfg.routings = {routing};
  if (load > 0.0) cfg.traffic.loads = {load};
  if (cfg.traffic.mode == "bernoulli") cfg.traffic.loads.resize(1);
  cfg = ExperimentConfig::from_json(cfg.to_json());  // re-validate overrides
  if (!trace.empty()) {
    const auto jobs = expand_jobs(cfg);
    if (jobs.size() != 1)
      throw config_error("trace", "a trace needs exactly one simulation; pick --routing and --seeds 1");
    Output tr(trace);
    emit(c, cfg, {run_job(cfg, jobs.front(), &tr.stream())});
    return kOk;
  }
  emit(c, cfg, run_sweep(cfg, c.workers));
  return kOk;
}

int cmd_sweep(const Common& c) {
  const ExperimentConfig cfg = load_with_overrides(c);
  emit(c, cfg, run_sweep(cfg, c.workers));
  return kOk;
}

int cmd_verify(const std::string& subject, const std::string& range) {
  const auto [lo, hi] = parse_range(range);
  const VerifyReport rep = verify_subject(subject, lo, hi);
  for (const auto& l : rep.lines)
    std::cout << subject << " n=" << l.n << ' ' << (l.skipped ? "SKIP" : l.pass ? "PASS" : "FAIL") << ' ' << l.detail
              << '\n';
  std::cout << subject << ' ' << (rep.pass() ? "PASS" : "FAIL") << '\n';
  return rep.pass() ? kOk : kInvariant;
}

int cmd_estimate(const std::string& config, const std::string& profile, const std::string& out_path) {
  EstimateConfig ec;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw config_error("config", "cannot open '" + config + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ec = parse_estimate_config(ss.str(), profile == "none" ? "" : profile);
  }
  Output out(out_path);
  out.stream() << "service,n,p,estimate\n";
  for (const auto& s : ec.services) {
    const ServiceSpec spec = ServiceSpec::parse(s);
    for (int n : ec.switches) {
      try {
        for (const auto& pt : estimate_curve(spec, {n}))
          out.stream() << '"' << s << "\"," << pt.n << ',' << pt.p << ',' << pt.estimate << '\n';
      } catch (const std::invalid_argument& e) {
        std::cerr << "skipping " << s << " at n=" << n << ": " << e.what() << '\n';
      }
    }
  }
  return kOk;
}

struct ExportArgs {
  std::string config;
  std::string profile = "full";
  int switches = 16;
  int servers = 1;
  std::string service;
  std::string format = "json";
  std::string routing = "ordering(srinr)";
  std::string out;
};

int cmd_export(const ExportArgs& a) {
  Topology topo = Topology::complete_graph(std::max(a.switches, 2), a.servers);
  if (!a.config.empty()) topo = load_config(a.config, a.profile == "none" ? "" : a.profile).topology.build();
  Output out(a.out);
  if (a.format == "json") {
    if (a.service.empty()) {
      out.stream() << to_json(topo).dump(2) << '\n';
    } else {
      const auto emb = ServiceEmbedding::embed(topo, ServiceSpec::parse(a.service).resolved(topo.switches()));
      out.stream() << to_json(emb).dump(2) << '\n';
    }
  } else if (a.format == "labels") {
    write_labelling(out.stream(), ArcLabelling::srinr(topo.switches()));
  } else {
    const auto routing = make_routing(a.routing, topo);
    write_cdg(out.stream(), build_cdg(*routing), topo);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-mesh interconnect simulator and deadlock verifier"};
  app.require_subcommand(1);

  Common run_args, sweep_args;
  std::string run_routing, trace;
  double run_load = 0.0;
  auto* run = app.add_subcommand("run", "run one load point of a config (every routing and seed)");
  add_common(run, run_args);
  run->add_option("--routing", run_routing, "override the routing list with one spec");
  run->add_option("--load", run_load, "override the load (Bernoulli)");
  run->add_option("--trace", trace, "per-packet trace CSV (single simulation only)");

  auto* sweep = app.add_subcommand("sweep", "run every routing, load and seed of a config");
  add_common(sweep, sweep_args);

  std::string subject, range;
  auto* verify = app.add_subcommand("verify", "exhaustive checks: theorem1, claim, cdg:<routing>, escape:<service>");
  verify->add_option("subject", subject)->required();
  verify->add_option("range", range, "n or a..b")->required();

  std::string est_config, est_profile = "full", est_out;
  auto* estimate = app.add_subcommand("estimate", "throughput estimate per service and switch count");
  estimate->add_option("--config", est_config, "estimate config (JSON)");
  estimate->add_option("--profile", est_profile)->check(CLI::IsMember({"ci", "full", "none"}));
  estimate->add_option("--out", est_out);

  ExportArgs ex;
  auto* exp = app.add_subcommand("export-topology", "write a topology, labelling or dependency graph");
  exp->add_option("--config", ex.config, "take the topology from this experiment config");
  exp->add_option("--profile", ex.profile)->check(CLI::IsMember({"ci", "full", "none"}));
  exp->add_option("--switches", ex.switches, "full-mesh size");
  exp->add_option("--servers-per-switch", ex.servers);
  exp->add_option("--service", ex.service, "embed this service topology (json format)");
  exp->add_option("--format", ex.format)->check(CLI::IsMember({"json", "labels", "cdg"}));
  exp->add_option("--routing", ex.routing, "routing for the cdg format");
  exp->add_option("--out", ex.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_args, run_routing, run_load, trace);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*verify) return cmd_verify(subject, range);
    if (*estimate) return cmd_estimate(est_config, est_profile, est_out);
    if (*exp) return cmd_export(ex);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const deadlock_detected& e) {
    std::cerr << "deadlock: " << e.what() << '\n';
    return kDeadlock;
  } catch (const invariant_violation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
