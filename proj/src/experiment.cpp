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

#include "fmnet/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include "fmnet/errors.hpp"
#include "fmnet/service.hpp"

namespace fmnet {

using nlohmann::json;

Topology TopologyConfig::build() const {
  if (servers_per_switch < 1) throw config_error("topology.servers_per_switch", "must be positive");
  if (kind == "complete") {
    if (switches < 2) throw config_error("topology.switches", "a full mesh needs at least 2 switches");
    return Topology::complete_graph(switches, servers_per_switch);
  }
  if (kind == "hyperx") {
    if (dims.empty()) throw config_error("topology.dims", "a hyperx needs at least one dimension");
    for (int d : dims)
      if (d < 2) throw config_error("topology.dims", "every dimension needs at least 2 switches");
    return Topology::hyperx(dims, servers_per_switch);
  }
  throw config_error("topology.kind", "expected 'complete' or 'hyperx', got '" + kind + "'");
}

namespace {

// Typed access to one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown fields.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw config_error(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  bool get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return false;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw config_error(field(key), "wrong type (" + std::string(it->type_name()) + ")");
    }
    return true;
  }

  const json* sub(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void ignore(const std::string& key) { seen_.insert(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw config_error(field(it.key()), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void validate(const ExperimentConfig& c) {
  const Topology topo = c.topology.build();
  if (c.routings.empty()) throw config_error("routings", "list at least one routing");
  for (size_t i = 0; i < c.routings.size(); ++i) {
    try {
      make_routing(c.routings[i], topo);
    } catch (const config_error& e) {
      throw config_error("routings[" + std::to_string(i) + "]", e.what());
    }
  }
  const TrafficConfig& t = c.traffic;
  if (t.mode == "bernoulli" || t.mode == "fixed_burst") {
    TrafficPattern::parse(t.pattern, topo, 1);
  } else if (t.mode == "kernel") {
    parse_mapping(t.mapping);
    try {
      make_kernel(t.kernel, topo.servers(), t.kernel_options);
    } catch (const config_error&) {
      throw;
    } catch (const std::exception& e) {
      throw config_error("traffic.kernel", e.what());
    }
  } else {
    throw config_error("traffic.mode", "expected bernoulli, fixed_burst or kernel, got '" + t.mode + "'");
  }
  if (t.mode == "bernoulli") {
    if (t.loads.empty()) throw config_error("traffic.loads", "list at least one load");
    for (size_t i = 0; i < t.loads.size(); ++i)
      if (!(t.loads[i] > 0.0 && t.loads[i] <= 1.0))
        throw config_error("traffic.loads[" + std::to_string(i) + "]", "load must lie in (0, 1]");
  }
  if (t.packets_per_server < 1) throw config_error("traffic.packets_per_server", "must be positive");
  if (c.cycles.measure < 1) throw config_error("cycles.measure", "must be positive");
  if (c.cycles.warmup < -1) throw config_error("cycles.warmup", "must be non-negative (or -1 for the default)");
  if (c.cycles.max < 1) throw config_error("cycles.max", "must be positive");
  c.engine.validate();
  if (c.seeds.empty()) throw config_error("seeds", "list at least one seed");
}

// Display names, falling back to the spec text when two routings would
// otherwise share a column value.
std::vector<std::string> routing_labels(const ExperimentConfig& cfg, const Topology& topo) {
  std::vector<std::string> names;
  for (const auto& spec : cfg.routings) names.push_back(make_routing(spec, topo)->name());
  std::vector<std::string> out = names;
  for (size_t i = 0; i < names.size(); ++i)
    for (size_t k = 0; k < names.size(); ++k)
      if (i != k && names[i] == names[k]) out[i] = cfg.routings[i];
  return out;
}

}  // namespace

json ExperimentConfig::to_json() const {
  json j;
  j["name"] = name;
  j["topology"] = {{"kind", topology.kind},
                   {"switches", topology.switches},
                   {"dims", topology.dims},
                   {"servers_per_switch", topology.servers_per_switch}};
  j["routings"] = routings;
  j["traffic"] = {{"mode", traffic.mode},
                  {"pattern", traffic.pattern},
                  {"loads", traffic.loads},
                  {"packets_per_server", traffic.packets_per_server},
                  {"kernel", traffic.kernel},
                  {"mapping", traffic.mapping},
                  {"message_packets", traffic.kernel_options.message_packets},
                  {"iterations", traffic.kernel_options.iterations},
                  {"allreduce_base_packets", traffic.kernel_options.allreduce_base_packets},
                  {"overlap", traffic.kernel_options.overlap}};
  j["cycles"] = {{"warmup", cycles.warmup}, {"measure", cycles.measure}, {"max", cycles.max}};
  j["engine"] = {{"packet_flits", engine.packet_flits},
                 {"input_buffer_flits", engine.input_buffer_flits},
                 {"output_buffer_flits", engine.output_buffer_flits},
                 {"link_latency", engine.link_latency},
                 {"credit_latency", engine.credit_latency},
                 {"router_delay", engine.router_delay},
                 {"speedup", engine.speedup},
                 {"deadlock_window", engine.deadlock_window},
                 {"reroute_blocked", engine.reroute_blocked}};
  j["seeds"] = seeds;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  Fields top(j, "");
  top.get("name", c.name);
  top.ignore("profiles");
  top.ignore("description");
  if (const json* t = top.sub("topology")) {
    Fields f(*t, "topology");
    f.get("kind", c.topology.kind);
    f.get("switches", c.topology.switches);
    f.get("dims", c.topology.dims);
    f.get("servers_per_switch", c.topology.servers_per_switch);
    f.finish();
  }
  top.get("routings", c.routings);
  if (const json* t = top.sub("traffic")) {
    Fields f(*t, "traffic");
    f.get("mode", c.traffic.mode);
    f.get("pattern", c.traffic.pattern);
    f.get("loads", c.traffic.loads);
    f.get("packets_per_server", c.traffic.packets_per_server);
    f.get("kernel", c.traffic.kernel);
    f.get("mapping", c.traffic.mapping);
    f.get("message_packets", c.traffic.kernel_options.message_packets);
    f.get("iterations", c.traffic.kernel_options.iterations);
    f.get("allreduce_base_packets", c.traffic.kernel_options.allreduce_base_packets);
    f.get("overlap", c.traffic.kernel_options.overlap);
    f.finish();
  }
  if (const json* t = top.sub("cycles")) {
    Fields f(*t, "cycles");
    f.get("warmup", c.cycles.warmup);
    f.get("measure", c.cycles.measure);
    f.get("max", c.cycles.max);
    f.finish();
  }
  if (const json* t = top.sub("engine")) {
    Fields f(*t, "engine");
    f.get("packet_flits", c.engine.packet_flits);
    f.get("input_buffer_flits", c.engine.input_buffer_flits);
    f.get("output_buffer_flits", c.engine.output_buffer_flits);
    f.get("link_latency", c.engine.link_latency);
    f.get("credit_latency", c.engine.credit_latency);
    f.get("router_delay", c.engine.router_delay);
    f.get("speedup", c.engine.speedup);
    f.get("deadlock_window", c.engine.deadlock_window);
    f.get("reroute_blocked", c.engine.reroute_blocked);
    f.finish();
  }
  top.get("seeds", c.seeds);
  top.finish();
  validate(c);
  return c;
}

std::string ExperimentConfig::hash() const {
  json j = to_json();
  j.erase("seeds");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

namespace {

json parse_with_profile(const std::string& text, const std::string& profile) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error("config", e.what());
  }
  const auto p = j.find("profiles");
  if (!profile.empty() && p != j.end()) {
    if (!p->is_object() || !p->contains(profile)) throw config_error("profiles", "no profile named '" + profile + "'");
    const json patch = (*p)[profile];
    j.erase("profiles");
    j.merge_patch(patch);
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& profile) {
  return ExperimentConfig::from_json(parse_with_profile(text, profile));
}

json EstimateConfig::to_json() const { return {{"name", name}, {"services", services}, {"switches", switches}}; }

EstimateConfig EstimateConfig::from_json(const json& j) {
  EstimateConfig c;
  Fields top(j, "");
  top.get("name", c.name);
  top.ignore("profiles");
  top.ignore("description");
  top.get("services", c.services);
  top.get("switches", c.switches);
  top.finish();
  if (c.services.empty()) throw config_error("services", "list at least one service");
  for (size_t i = 0; i < c.services.size(); ++i) {
    try {
      ServiceSpec::parse(c.services[i]);
    } catch (const std::exception& e) {
      throw config_error("services[" + std::to_string(i) + "]", e.what());
    }
  }
  for (size_t i = 0; i < c.switches.size(); ++i)
    if (c.switches[i] < 2) throw config_error("switches[" + std::to_string(i) + "]", "need at least 2 switches");
  return c;
}

EstimateConfig parse_estimate_config(const std::string& text, const std::string& profile) {
  return EstimateConfig::from_json(parse_with_profile(text, profile));
}

ExperimentConfig load_config(const std::string& path, const std::string& profile) {
  std::ifstream in(path);
  if (!in) throw config_error("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), profile);
}

std::vector<Job> expand_jobs(const ExperimentConfig& cfg) {
  const int loads = cfg.traffic.mode == "bernoulli" ? static_cast<int>(cfg.traffic.loads.size()) : 1;
  std::vector<Job> jobs;
  for (int r = 0; r < static_cast<int>(cfg.routings.size()); ++r)
    for (int l = 0; l < loads; ++l)
      for (std::uint64_t s : cfg.seeds) jobs.push_back({r, l, s});
  return jobs;
}

std::string pattern_label(const ExperimentConfig& cfg) {
  if (cfg.traffic.mode == "kernel") return cfg.traffic.kernel + "/" + cfg.traffic.mapping;
  return cfg.traffic.pattern;
}

JobResult run_job(const ExperimentConfig& cfg, const Job& job, std::ostream* trace) {
  const Topology topo = cfg.topology.build();
  const auto routing = make_routing(cfg.routings.at(job.routing), topo);
  JobResult out;
  out.row.config_hash = cfg.hash();
  out.row.seed = job.seed;
  out.row.routing = routing_labels(cfg, topo)[job.routing];
  out.row.pattern = pattern_label(cfg);
  const TrafficConfig& t = cfg.traffic;
  if (t.mode == "bernoulli") {
    const auto pattern = TrafficPattern::parse(t.pattern, topo, job.seed);
    const BernoulliRun run{t.loads.at(job.load), cfg.cycles.effective_warmup(), cfg.cycles.measure};
    out.row.m = run_bernoulli(*routing, pattern, run, cfg.engine, job.seed, TraceSink{trace});
  } else if (t.mode == "fixed_burst") {
    const auto pattern = TrafficPattern::parse(t.pattern, topo, job.seed);
    out.row.m = run_fixed_burst(*routing, pattern, t.packets_per_server, cfg.engine, job.seed, cfg.cycles.max,
                                TraceSink{trace});
  } else {
    const auto kernel = make_kernel(t.kernel, topo.servers(), t.kernel_options);
    out.row.m = run_kernel(*routing, *kernel, parse_mapping(t.mapping), cfg.engine, job.seed, cfg.cycles.max,
                           TraceSink{trace}, t.kernel_options.overlap);
    out.phase_cycles = out.row.m.phase_cycles;
  }
  return out;
}

std::vector<JobResult> run_sweep(const ExperimentConfig& cfg, int workers) {
  const std::vector<Job> jobs = expand_jobs(cfg);
  const long n = static_cast<long>(jobs.size());
  std::vector<JobResult> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<bool> failed{false};
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  // Simulations vary wildly in length, so hand them out one at a time.
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      out[i] = run_job(cfg, jobs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
      failed = true;
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace serial {
std::vector<JobResult> run_sweep(const ExperimentConfig& cfg) {
  std::vector<JobResult> out;
  for (const Job& job : expand_jobs(cfg)) out.push_back(run_job(cfg, job));
  return out;
}
}  // namespace serial

void write_results(std::ostream& os, const std::vector<JobResult>& results) {
  os << csv_header() << '\n';
  for (const auto& r : results) os << to_csv(r.row) << '\n';
}

void write_phases(std::ostream& os, const std::vector<JobResult>& results) {
  os << "config_hash,seed,routing,pattern,phase,cycle\n";
  for (const auto& r : results)
    for (size_t ph = 0; ph < r.phase_cycles.size(); ++ph)
      os << r.row.config_hash << ',' << r.row.seed << ',' << r.row.routing << ',' << r.row.pattern << ',' << ph << ','
         << r.phase_cycles[ph] << '\n';
}

}  // namespace fmnet
