#include "transtab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "transtab/engine.hpp"
#include "transtab/errors.hpp"
#include "transtab/io.hpp"
#include "transtab/manifest.hpp"
#include "transtab/scenario_gen.hpp"
#include "transtab/stability.hpp"

namespace transtab::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt6(double v) {
  if (std::isnan(v)) return "undefined";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string fmt6(const std::optional<double>& v) { return v ? fmt6(*v) : "undefined"; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Metric> parse_metrics(const std::string& list) {
  std::set<Metric> seen;
  for (const auto& name : split_list(list)) {
    auto m = parse_metric(name);
    if (!m) throw UsageError("--metrics: unknown metric '" + name + "'");
    seen.insert(*m);
  }
  if (seen.empty()) throw UsageError("--metrics: empty list");
  return {seen.begin(), seen.end()};
}

std::vector<Measure> parse_measures(const std::string& list) {
  std::set<Measure> seen;
  for (const auto& name : split_list(list)) {
    auto m = parse_measure(name);
    if (!m) throw UsageError("--measures: unknown measure '" + name + "'");
    seen.insert(*m);
  }
  if (seen.empty()) throw UsageError("--measures: empty list");
  return {seen.begin(), seen.end()};
}

std::vector<Component> parse_components(const std::string& list) {
  std::vector<Component> out;
  for (const auto& name : split_list(list)) {
    auto c = parse_component(name);
    if (!c) throw UsageError("--component: unknown component '" + name + "'");
    if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
  }
  if (out.empty()) throw UsageError("--component: empty list");
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

struct Options {
  std::string manifest;
  std::string out;
  std::string experiments;
  std::string spec;
  std::string source;
  std::string target;
  std::string metrics;
  std::string measures;
  std::string component;
  std::string mode = "sampled";
  std::uint64_t budget = 1'000'000;
  std::optional<std::uint64_t> seed;
  std::string strategy = "uniform";
  double fraction = 0.5;
  double min_fraction = 0.02;
  double max_fraction = 1.0;
  std::size_t pool_size = 100;
  std::string subset_accuracies;
  double noise = 0.0;
};

ScenarioManifest load_with_overrides(const Options& o) {
  ScenarioManifest m = load_manifest(o.manifest);
  if (!o.metrics.empty()) m.metrics = parse_metrics(o.metrics);
  if (!o.measures.empty()) m.measures = parse_measures(o.measures);
  return m;
}

const PairPaths& require_pair(const ScenarioManifest& m, const Options& o) {
  const PairPaths* p = m.find_pair(o.source, o.target);
  if (!p) {
    throw ManifestError("manifest has no pair for source '" + o.source + "' and target '" +
                        o.target + "'");
  }
  return *p;
}

// ---------------------------------------------------------------------------

int cmd_metrics(const Options& o, std::ostream& out, std::ostream& err) {
  const ScenarioManifest m = load_with_overrides(o);
  const PairData data = load_pair(m, require_pair(m, o));
  MetricOptions options{m.nleep, m.gbc_covariance};
  const MetricInputs inputs{&data.features, &data.predictions, &data.labels};

  std::string table = "source,target,metric,value\n";
  for (Metric metric : m.metrics) {
    std::string value;
    try {
      value = fmt6(compute_metric(metric, inputs, options).value);
    } catch (const MetricError& e) {
      err << "warning: " << to_string(metric) << ": " << e.what() << "\n";
      value = "undefined";
    }
    table += o.source + "," + o.target + "," + std::string(to_string(metric)) + "," + value + "\n";
  }
  if (!o.out.empty()) {
    const fs::path path(o.out);
    if (path.has_parent_path()) ensure_dir(path.parent_path());
    write_text(path, table);
  }
  out << table;
  return kExitOk;
}

int cmd_scenario(const Options& o, std::ostream& out, std::ostream& err) {
  const ScenarioManifest m = load_with_overrides(o);
  const fs::path dir(o.out);
  ensure_dir(dir);
  const std::size_t workers = default_workers();

  const MetricCache cache = build_cache(m, workers);
  for (const auto& f : cache.failures()) {
    err << "warning: " << to_string(cache.metrics()[f.metric]) << " undefined for ("
        << cache.sources()[f.source] << ", " << cache.targets()[f.target] << "): " << f.reason
        << "\n";
  }
  const ExperimentSet xs = run_scenario(cache, m.name, m.pool_size, m.measures, workers);
  write_experiments_csv(xs, dir / "experiments.csv");
  write_text(dir / "summary.json", scenario_summary_json(xs, &cache, m.pool_size));
  write_cache_csv(cache, dir / "cache.csv");

  out << "scenario,experiments,expected,metric_evaluations\n"
      << m.name << "," << xs.size() << ","
      << expected_experiment_count(cache, m.pool_size, m.measures.size()) << ","
      << cache.metric_evaluations << "\n";
  return kExitOk;
}

ExperimentSet experiments_from(const Options& o) {
  if (!o.experiments.empty()) {
    if (!o.manifest.empty()) throw UsageError("give either --experiments or --manifest, not both");
    return read_experiments_csv(o.experiments);
  }
  if (o.manifest.empty()) throw UsageError("one of --experiments or --manifest is required");
  return run_scenario(load_with_overrides(o), default_workers());
}

int cmd_stability(const Options& o, std::ostream& out, std::ostream& err) {
  EdgeOptions edges;
  if (o.mode == "exact") {
    edges.mode = PairMode::kExact;
  } else if (o.mode == "sampled") {
    edges.mode = PairMode::kSampled;
  } else {
    throw UsageError("--mode must be 'exact' or 'sampled'");
  }
  edges.budget = o.budget;
  edges.seed = o.seed.value_or(0);
  const std::vector<Component> components =
      o.component.empty() ? std::vector<Component>(std::begin(kAllComponents), std::end(kAllComponents))
                          : parse_components(o.component);

  const ExperimentSet xs = experiments_from(o);
  const StabilityReport report = stability_report(xs, components, edges, default_workers());
  const WinRateTable table = win_rate(xs);
  for (const auto& c : report.components) {
    if (!c.ss) {
      err << "warning: SS(" << to_string(c.component) << ") undefined: "
          << (c.note.empty() ? "no edges" : c.note) << "\n";
    }
  }

  const std::string ss_csv = stability_csv(report);
  const std::string wr_csv = win_rate_csv(table);
  if (!o.out.empty()) {
    const fs::path dir(o.out);
    ensure_dir(dir);
    write_text(dir / "stability.csv", ss_csv);
    write_text(dir / "win_rate.csv", wr_csv);
    write_text(dir / "stability.json", stability_json(report, &table));
  }
  out << ss_csv << "\n" << wr_csv;
  return kExitOk;
}

int cmd_winrate(const Options& o, std::ostream& out, std::ostream&) {
  const ExperimentSet xs = experiments_from(o);
  const std::string csv = win_rate_csv(win_rate(xs));
  if (!o.out.empty()) {
    const fs::path dir(o.out);
    ensure_dir(dir);
    write_text(dir / "win_rate.csv", csv);
  }
  out << csv;
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  SyntheticSpec spec = load_synthetic_spec(o.spec);
  if (o.seed) spec.seed = *o.seed;
  if (!o.metrics.empty()) spec.metrics = parse_metrics(o.metrics);
  if (!o.measures.empty()) spec.measures = parse_measures(o.measures);
  const fs::path dir(o.out);
  ensure_dir(dir);
  const ScenarioManifest m = generate_synthetic_scenario(spec, dir, default_workers());
  out << "scenario,sources,targets,pairs,manifest\n"
      << m.name << "," << m.sources.size() << "," << m.targets.size() << "," << m.pairs.size()
      << "," << (dir / "manifest.json").string() << "\n";
  return kExitOk;
}

std::vector<double> read_subset_accuracies(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open subset accuracies " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": not a number");
    }
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": accuracy must lie in [0, 1]");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_targetpool(const Options& o, std::ostream& out, std::ostream& err) {
  const ScenarioManifest m = load_with_overrides(o);
  const PairData data = load_pair(m, require_pair(m, o));

  TargetPoolSpec spec;
  if (o.strategy == "uniform") {
    spec = TargetPoolSpec::uniform(o.seed.value_or(m.seed), o.min_fraction, o.max_fraction);
  } else if (o.strategy == "fixed") {
    spec = TargetPoolSpec::fixed(o.seed.value_or(m.seed), o.fraction);
  } else {
    throw UsageError("--strategy must be 'uniform' or 'fixed'");
  }
  spec.pool_size = o.pool_size;
  const std::vector<ClassSubset> pool = sample_target_pool(spec, data.labels);

  std::vector<double> accuracies;
  if (!o.subset_accuracies.empty()) {
    accuracies = read_subset_accuracies(o.subset_accuracies);
  } else {
    err << "warning: no --subset-accuracies given; using synthetic accuracies increasing in "
           "class count\n";
    const auto classes = data.labels.distinct_classes();
    accuracies = class_count_accuracies(pool, classes, o.noise, spec.seed + 1);
  }

  TargetSelectionData selection{data.features, std::nullopt, data.labels};
  if (std::any_of(m.metrics.begin(), m.metrics.end(), needs_predictions)) {
    selection.predictions = data.predictions;
  }
  const MetricOptions metric_options{m.nleep, m.gbc_covariance};

  std::string quality = "metric,measure,quality,failed_subsets\n";
  std::vector<std::vector<double>> values;
  for (Measure measure : m.measures) {
    const TargetSelectionResult r = run_target_selection(pool, selection, accuracies, m.metrics,
                                                         measure, metric_options, {},
                                                         default_workers());
    for (std::size_t i = 0; i < r.metrics.size(); ++i) {
      quality += std::string(to_string(r.metrics[i])) + "," + std::string(to_string(measure)) +
                 "," + fmt6(r.quality[i].value) + "," + std::to_string(r.failures[i].size()) +
                 "\n";
    }
    if (values.empty()) values = r.metric_values;
  }

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    ensure_dir(dir);
    std::string header = "subset,classes,class_ids,accuracy";
    for (Metric metric : m.metrics) header += "," + std::string(to_string(metric));
    std::string rows = header + "\n";
    for (std::size_t p = 0; p < pool.size(); ++p) {
      rows += std::to_string(p) + "," + std::to_string(pool[p].size()) + ",";
      for (std::size_t c = 0; c < pool[p].size(); ++c) {
        if (c > 0) rows += ';';
        rows += std::to_string(pool[p][c]);
      }
      rows += "," + fmt6(accuracies[p]);
      for (const auto& per_metric : values) rows += "," + fmt6(per_metric[p]);
      rows += "\n";
    }
    write_text(dir / "pool.csv", rows);
    write_text(dir / "quality.csv", quality);
  }
  out << quality;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transferability metric evaluation and setup-stability analysis", "transtab"};
  app.require_subcommand(1, 1);
  Options o;

  auto* metrics = app.add_subcommand("metrics", "Score one (source, target) pair with every metric");
  metrics->add_option("--manifest", o.manifest, "Scenario manifest (JSON)")->required();
  metrics->add_option("--source", o.source, "Source id")->required();
  metrics->add_option("--target", o.target, "Target id")->required();
  metrics->add_option("--metrics", o.metrics, "Comma-separated metric names");
  metrics->add_option("--out", o.out, "Also write the table to this file");

  auto* scenario = app.add_subcommand("scenario", "Build the metric cache and run every experiment");
  scenario->add_option("--manifest", o.manifest, "Scenario manifest (JSON)")->required();
  scenario->add_option("--out", o.out, "Output directory")->required();
  scenario->add_option("--metrics", o.metrics, "Comma-separated metric names");
  scenario->add_option("--measures", o.measures, "Comma-separated measure names");

  auto* stability = app.add_subcommand("stability", "Setup Stability per component and win rates");
  stability->add_option("--experiments", o.experiments, "Experiment export (experiments.csv)");
  stability->add_option("--manifest", o.manifest, "Run the scenario in memory instead");
  stability->add_option("--out", o.out, "Output directory");
  stability->add_option("--component", o.component, "target,measure,source_pool (default all)");
  stability->add_option("--mode", o.mode, "exact or sampled (default sampled)");
  stability->add_option("--budget", o.budget, "Pair budget per component in sampled mode");
  stability->add_option("--seed", o.seed, "Sampling seed");
  stability->add_option("--metrics", o.metrics, "With --manifest: metric names");
  stability->add_option("--measures", o.measures, "With --manifest: measure names");

  auto* winrate = app.add_subcommand("winrate", "Win-rate table");
  winrate->add_option("--experiments", o.experiments, "Experiment export (experiments.csv)");
  winrate->add_option("--manifest", o.manifest, "Run the scenario in memory instead");
  winrate->add_option("--out", o.out, "Output directory");
  winrate->add_option("--metrics", o.metrics, "With --manifest: metric names");
  winrate->add_option("--measures", o.measures, "With --manifest: measure names");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
  synth->add_option("--spec", o.spec, "Synthetic spec (JSON)")->required();
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--seed", o.seed, "Override the spec seed");
  synth->add_option("--metrics", o.metrics, "Comma-separated metric names");
  synth->add_option("--measures", o.measures, "Comma-separated measure names");

  auto* targetpool =
      app.add_subcommand("targetpool", "Rank class-subsampled targets through one source");
  targetpool->add_option("--manifest", o.manifest, "Scenario manifest (JSON)")->required();
  targetpool->add_option("--source", o.source, "Source id")->required();
  targetpool->add_option("--target", o.target, "Target id")->required();
  targetpool->add_option("--strategy", o.strategy, "uniform or fixed (default uniform)");
  targetpool->add_option("--fraction", o.fraction, "Fixed strategy class fraction");
  targetpool->add_option("--min-fraction", o.min_fraction, "Uniform strategy lower fraction");
  targetpool->add_option("--max-fraction", o.max_fraction, "Uniform strategy upper fraction");
  targetpool->add_option("--pool-size", o.pool_size, "Number of subsets");
  targetpool->add_option("--seed", o.seed, "Sampling seed (default: manifest seed)");
  targetpool->add_option("--subset-accuracies", o.subset_accuracies,
                         "One accuracy per line, in subset order");
  targetpool->add_option("--noise", o.noise, "Noise on synthetic subset accuracies");
  targetpool->add_option("--metrics", o.metrics, "Comma-separated metric names");
  targetpool->add_option("--measures", o.measures, "Comma-separated measure names");
  targetpool->add_option("--out", o.out, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (metrics->parsed()) return cmd_metrics(o, out, err);
    if (scenario->parsed()) return cmd_scenario(o, out, err);
    if (stability->parsed()) return cmd_stability(o, out, err);
    if (winrate->parsed()) return cmd_winrate(o, out, err);
    if (synth->parsed()) return cmd_synth(o, out, err);
    if (targetpool->parsed()) return cmd_targetpool(o, out, err);
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ManifestError& e) {
    err << "manifest error: " << e.what() << "\n";
    return kExitManifest;
  } catch (const IoError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const FormatError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const MetricError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace transtab::cli
