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

#include "fmnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fmnet {

double jain_index(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("jain index of an empty vector");
  double sum = 0.0, sq = 0.0;
  for (double v : x) {
    if (v < 0.0) throw std::invalid_argument("jain index needs non-negative loads");
    sum += v;
    sq += v * v;
  }
  if (sq == 0.0) throw std::invalid_argument("jain index undefined for an all-zero vector");
  return sum * sum / (static_cast<double>(x.size()) * sq);
}

std::vector<double> hop_distribution(const std::vector<int>& hops, int buckets) {
  if (hops.empty()) throw std::invalid_argument("hop distribution needs at least one packet");
  std::vector<std::int64_t> hist;
  for (int h : hops) {
    if (h < 0) throw std::invalid_argument("negative hop count");
    if (static_cast<size_t>(h) >= hist.size()) hist.resize(h + 1, 0);
    ++hist[h];
  }
  return hop_distribution_from_histogram(hist, buckets);
}

std::vector<double> hop_distribution_from_histogram(const std::vector<std::int64_t>& histogram, int buckets) {
  if (buckets < 1) throw std::invalid_argument("need at least one bucket");
  const std::int64_t total = std::accumulate(histogram.begin(), histogram.end(), std::int64_t{0});
  std::vector<double> out(buckets, 0.0);
  if (total == 0) return out;
  for (size_t h = 0; h < histogram.size(); ++h)
    out[std::min<size_t>(h, buckets - 1)] += static_cast<double>(histogram[h]) / static_cast<double>(total);
  return out;
}

double nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile must lie in (0, 1]");
  // Guard against p * N landing a hair above an integer.
  const double exact = p * static_cast<double>(sorted.size());
  auto rank = static_cast<size_t>(std::ceil(exact - 1e-9));
  rank = std::clamp<size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::vector<double> latency_percentiles(std::vector<double> samples, const std::vector<double>& ps) {
  std::sort(samples.begin(), samples.end());
  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(nearest_rank(samples, p));
  return out;
}

UtilizationSplit link_utilization_split(const std::vector<std::int64_t>& busy, const std::vector<std::uint8_t>& roles,
                                        std::int64_t cycles) {
  UtilizationSplit u;
  if (busy.empty() || cycles <= 0) return u;
  double main_sum = 0.0, serv_sum = 0.0;
  std::int64_t main_n = 0, serv_n = 0;
  for (size_t a = 0; a < busy.size(); ++a) {
    const double f = static_cast<double>(busy[a]) / static_cast<double>(cycles);
    if (!roles.empty() && roles[a]) {
      serv_sum += f;
      ++serv_n;
    } else {
      main_sum += f;
      ++main_n;
    }
  }
  if (main_n) u.main = main_sum / static_cast<double>(main_n);
  if (serv_n) u.service = serv_sum / static_cast<double>(serv_n);
  return u;
}

MetricsAccumulator::MetricsAccumulator(int servers, int arcs, std::int64_t window_begin, std::int64_t window_end)
    : servers_(servers), begin_(window_begin), end_(window_end), injected_(servers, 0), busy_(arcs, 0) {}

void MetricsAccumulator::on_delivered(std::int64_t created, std::int64_t delivered, int hops) {
  max_hops_ = std::max(max_hops_, hops);
  if (in_window(delivered)) {
    ++delivered_;
    if (static_cast<size_t>(hops) >= hop_hist_.size()) hop_hist_.resize(hops + 1, 0);
    ++hop_hist_[hops];
  }
  if (in_window(created) && delivered < end_) latency_.push_back(static_cast<double>(delivered - created));
}

RunMetrics MetricsAccumulator::summarize(double offered, const std::vector<std::uint8_t>& arc_roles) const {
  RunMetrics m;
  const std::int64_t cycles = std::max<std::int64_t>(end_ - begin_, 1);
  m.offered = offered;
  m.accepted = static_cast<double>(ejected_) / (static_cast<double>(servers_) * static_cast<double>(cycles));
  if (!latency_.empty()) {
    m.mean_latency = std::accumulate(latency_.begin(), latency_.end(), 0.0) / static_cast<double>(latency_.size());
    const auto pc = latency_percentiles(latency_, {0.99, 0.999, 0.9999});
    m.p99 = pc[0];
    m.p999 = pc[1];
    m.p9999 = pc[2];
  }
  std::vector<double> x(injected_.begin(), injected_.end());
  const bool any = std::any_of(x.begin(), x.end(), [](double v) { return v > 0; });
  m.jain = any ? jain_index(x) : 0.0;
  m.hops = hop_distribution_from_histogram(hop_hist_, 5);
  const auto u = link_utilization_split(busy_, arc_roles, cycles);
  m.util_main = u.main;
  m.util_service = u.service;
  m.packets_delivered = delivered_;
  m.max_hops_seen = max_hops_;
  return m;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') continue;
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string csv_header() {
  return "config_hash,seed,routing,pattern,offered,accepted,mean_latency,p99,p999,p9999,jain,"
         "hops_0,hops_1,hops_2,hops_3,hops_4,util_main,util_service,cycles_to_finish";
}

std::string to_csv(const ResultRow& r) {
  std::ostringstream os;
  os << r.config_hash << ',' << r.seed << ',' << quote(r.routing) << ',' << quote(r.pattern) << ',' << fmt(r.m.offered)
     << ',' << fmt(r.m.accepted) << ',' << fmt(r.m.mean_latency) << ',' << fmt(r.m.p99) << ',' << fmt(r.m.p999) << ','
     << fmt(r.m.p9999) << ',' << fmt(r.m.jain);
  for (int b = 0; b < 5; ++b) os << ',' << fmt(b < static_cast<int>(r.m.hops.size()) ? r.m.hops[b] : 0.0);
  os << ',' << fmt(r.m.util_main) << ',';
  if (r.m.util_service) os << fmt(*r.m.util_service);
  os << ',';
  if (r.m.cycles_to_finish >= 0) os << r.m.cycles_to_finish;
  return os.str();
}

ResultRow parse_csv_row(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 19) throw std::invalid_argument("results row needs 19 fields, got " + std::to_string(f.size()));
  ResultRow r;
  r.config_hash = f[0];
  r.seed = std::stoull(f[1]);
  r.routing = f[2];
  r.pattern = f[3];
  r.m.offered = std::stod(f[4]);
  r.m.accepted = std::stod(f[5]);
  r.m.mean_latency = std::stod(f[6]);
  r.m.p99 = std::stod(f[7]);
  r.m.p999 = std::stod(f[8]);
  r.m.p9999 = std::stod(f[9]);
  r.m.jain = std::stod(f[10]);
  r.m.hops.clear();
  for (int b = 0; b < 5; ++b) r.m.hops.push_back(std::stod(f[11 + b]));
  r.m.util_main = std::stod(f[16]);
  if (!f[17].empty()) r.m.util_service = std::stod(f[17]);
  if (!f[18].empty()) r.m.cycles_to_finish = std::stoll(f[18]);
  return r;
}

}  // namespace fmnet
