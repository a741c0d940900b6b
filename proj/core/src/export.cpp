#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "transtab/combinations.hpp"
#include "transtab/engine.hpp"
#include "transtab/errors.hpp"

namespace transtab {
namespace {

constexpr std::string_view kExperimentHeader = "experiment_id,target,measure,pool,metric,quality";

void append_hex(std::string& out, std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  char buf[16];
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[v & 0xF];
    v >>= 4;
  }
  out.append(buf, 16);
}

void append_quality(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "undefined";
    return;
  }
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  out.append(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_experiments_csv(const ExperimentSet& xs, std::ostream& out) {
  std::string buf;
  buf.reserve(1 << 20);
  buf += kExperimentHeader;
  buf += '\n';
  std::string pool;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Experiment& xp = xs.experiments[i];
    pool.clear();
    for (auto s : xp.pool_members()) {
      if (!pool.empty()) pool += ';';
      pool += xs.sources[s];
    }
    const auto q = xs.outcome(i);
    for (std::size_t m = 0; m < xs.metrics.size(); ++m) {
      append_hex(buf, xs.ids[i]);
      buf += ',';
      buf += xs.targets[xp.target];
      buf += ',';
      buf += to_string(xp.measure);
      buf += ',';
      buf += pool;
      buf += ',';
      buf += to_string(xs.metrics[m]);
      buf += ',';
      append_quality(buf, q[m]);
      buf += '\n';
    }
    if (buf.size() > (1 << 20) - 4096) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_experiments_csv(const ExperimentSet& xs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_experiments_csv(xs, out);
  if (!out) throw IoError("write failed for " + path.string());
}

ExperimentSet read_experiments_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_experiments_csv(in, path.string());
}

ExperimentSet read_experiments_csv(std::istream& in, std::string_view origin) {
  const std::string where(origin);
  struct Row {
    std::uint64_t id;
    std::string target;
    Measure measure;
    std::string pool;
    Metric metric;
    double quality;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kExperimentHeader) {
        throw FormatError(where + ": expected header '" + std::string(kExperimentHeader) + "'");
      }
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    const std::string loc = where + ":" + std::to_string(line_no);
    if (f.size() != 6) throw FormatError(loc + ": expected 6 fields");
    Row r;
    auto [p, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), r.id, 16);
    if (ec != std::errc() || p != f[0].data() + f[0].size()) {
      throw FormatError(loc + ": bad experiment id '" + std::string(f[0]) + "'");
    }
    r.target = std::string(f[1]);
    auto measure = parse_measure(f[2]);
    if (!measure) throw FormatError(loc + ": unknown measure '" + std::string(f[2]) + "'");
    r.measure = *measure;
    r.pool = std::string(f[3]);
    auto metric = parse_metric(f[4]);
    if (!metric) throw FormatError(loc + ": unknown metric '" + std::string(f[4]) + "'");
    r.metric = *metric;
    if (f[5] == "undefined") {
      r.quality = std::numeric_limits<double>::quiet_NaN();
    } else {
      auto [q, qec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), r.quality);
      if (qec != std::errc() || q != f[5].data() + f[5].size() || !std::isfinite(r.quality)) {
        throw FormatError(loc + ": bad quality '" + std::string(f[5]) + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  if (!header) throw FormatError(where + ": missing header");

  ExperimentSet xs;
  std::set<std::string> sources, targets;
  std::set<Metric> metrics;
  std::set<Measure> measures;
  std::unordered_map<std::string, std::vector<std::string>> pool_cache;
  for (const auto& r : rows) {
    targets.insert(r.target);
    metrics.insert(r.metric);
    measures.insert(r.measure);
    auto [it, inserted] = pool_cache.try_emplace(r.pool);
    if (inserted) {
      for (auto id : split(r.pool, ';')) {
        if (id.empty()) throw FormatError(where + ": empty id in pool '" + r.pool + "'");
        it->second.emplace_back(id);
        sources.insert(std::string(id));
      }
    }
  }
  if (sources.size() > kMaxSources) {
    throw FormatError(where + ": more than " + std::to_string(kMaxSources) + " distinct sources");
  }
  xs.sources.assign(sources.begin(), sources.end());
  xs.targets.assign(targets.begin(), targets.end());
  xs.metrics.assign(metrics.begin(), metrics.end());
  xs.measures.assign(measures.begin(), measures.end());

  auto index_of = [](const auto& vec, const auto& value) {
    return static_cast<std::size_t>(std::lower_bound(vec.begin(), vec.end(), value) - vec.begin());
  };
  std::unordered_map<std::string, std::uint64_t> pool_masks;
  for (const auto& [pool, ids] : pool_cache) {
    std::uint64_t mask = 0;
    for (const auto& id : ids) mask |= std::uint64_t{1} << index_of(xs.sources, id);
    pool_masks[pool] = mask;
  }

  std::unordered_map<std::uint64_t, std::size_t> slot;
  std::vector<std::size_t> filled;
  const std::size_t n_metrics = xs.metrics.size();
  for (const auto& r : rows) {
    auto [it, inserted] = slot.try_emplace(r.id, xs.experiments.size());
    const Experiment xp{pool_masks[r.pool], static_cast<std::uint32_t>(index_of(xs.targets, r.target)),
                        r.measure};
    if (inserted) {
      xs.experiments.push_back(xp);
      xs.ids.push_back(r.id);
      xs.quality.resize(xs.quality.size() + n_metrics, std::numeric_limits<double>::quiet_NaN());
      filled.resize(filled.size() + n_metrics, 0);
    } else if (!(xs.experiments[it->second] == xp)) {
      throw FormatError(where + ": experiment id " + std::to_string(r.id) +
                        " is reused for a different setup");
    }
    const std::size_t m = index_of(xs.metrics, r.metric);
    if (filled[it->second * n_metrics + m]++ > 0) {
      throw FormatError(where + ": duplicate metric '" + std::string(to_string(r.metric)) +
                        "' for one experiment");
    }
    xs.quality[it->second * n_metrics + m] = r.quality;
  }
  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (filled[i] == 0) {
      throw FormatError(where + ": experiment " + std::to_string(i) + " lacks metric '" +
                        std::string(to_string(xs.metrics[i % n_metrics])) + "'");
    }
  }
  return xs;
}

std::string scenario_summary_json(const ExperimentSet& xs, const MetricCache* cache,
                                  std::size_t pool_size) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["scenario"] = xs.scenario;
  doc["experiments"] = xs.size();
  if (cache) {
    doc["expected_experiments"] = expected_experiment_count(*cache, pool_size, xs.measures.size());
    doc["metric_evaluations"] = cache->metric_evaluations;
  }
  doc["pool_size"] = pool_size;
  doc["sources"] = xs.sources;
  doc["targets"] = xs.targets;
  doc["metrics"] = ordered_json::array();
  for (auto m : xs.metrics) doc["metrics"].push_back(std::string(to_string(m)));
  doc["measures"] = ordered_json::array();
  for (auto m : xs.measures) doc["measures"].push_back(std::string(to_string(m)));
  doc["count_by_target"] = xs.count_by_target();
  doc["count_by_measure"] = xs.count_by_measure();
  ordered_json undefined = ordered_json::object();
  for (const auto& [key, count] : xs.undefined_counts()) {
    undefined[std::string(to_string(key.first))][std::string(to_string(key.second))] = count;
  }
  doc["undefined_quality"] = undefined;
  if (cache) {
    ordered_json failures = ordered_json::array();
    for (const auto& f : cache->failures()) {
      failures.push_back({{"metric", std::string(to_string(cache->metrics()[f.metric]))},
                          {"source", cache->sources()[f.source]},
                          {"target", cache->targets()[f.target]},
                          {"reason", f.reason}});
    }
    doc["degenerate_cells"] = failures;
  }
  return doc.dump(2) + "\n";
}

void write_cache_csv(const MetricCache& cache, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  std::string buf = "metric,source_id,target_id,value,accuracy,status\n";
  for (std::size_t m = 0; m < cache.metrics().size(); ++m) {
    for (std::size_t t = 0; t < cache.targets().size(); ++t) {
      for (auto s : cache.candidates(t)) {
        buf += to_string(cache.metrics()[m]);
        buf += ',';
        buf += cache.sources()[s];
        buf += ',';
        buf += cache.targets()[t];
        buf += ',';
        append_quality(buf, cache.metric_value(m, t, s));
        buf += ',';
        append_quality(buf, cache.accuracy(t, s));
        buf += ',';
        buf += cache.status(m, t, s) == CellStatus::kOk ? "ok" : "degenerate";
        buf += '\n';
      }
    }
  }
  out << buf;
}

}  // namespace transtab
