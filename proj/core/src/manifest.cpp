#include "transtab/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "transtab/errors.hpp"

namespace transtab {
namespace {

using nlohmann::json;

const std::set<std::string> kTopLevelKeys = {
    "scenario", "sources", "targets", "pool_size", "measures", "metrics", "accuracies",
    "pairs",    "subsample", "nleep", "gbc",       "seed"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ManifestError(where + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ManifestError(where + ": missing required field '" + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ManifestError("field '" + field + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ManifestError("field '" + field + "' must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

std::string relative_to(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty()) return {};
  auto rel = p.lexically_relative(base);
  if (rel.empty() || *rel.begin() == "..") return p.generic_string();
  return rel.generic_string();
}

template <typename T>
T number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ManifestError("field '" + field + "' must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0)) {
      throw ManifestError("field '" + field + "' must be a non-negative integer");
    }
  }
  return v.get<T>();
}

}  // namespace

std::vector<std::size_t> ScenarioManifest::candidates(std::size_t target_index) const {
  std::vector<std::size_t> out;
  const std::string& target = targets.at(target_index);
  for (std::size_t s = 0; s < sources.size(); ++s) {
    if (sources[s] != target) out.push_back(s);
  }
  return out;
}

const PairPaths* ScenarioManifest::find_pair(std::string_view source,
                                             std::string_view target) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair(source, target),
                             [](const PairPaths& p, const auto& key) {
                               return std::tie(p.source, p.target) <
                                      std::tie(key.first, key.second);
                             });
  if (it == pairs.end() || it->source != source || it->target != target) return nullptr;
  return &*it;
}

ScenarioManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");
  check_keys(doc, kTopLevelKeys, "manifest");

  ScenarioManifest m;
  const auto& name = require(doc, "scenario", "manifest");
  if (!name.is_string()) throw ManifestError("field 'scenario' must be a string");
  m.name = name.get<std::string>();

  m.sources = string_list(require(doc, "sources", "manifest"), "sources");
  m.targets = string_list(require(doc, "targets", "manifest"), "targets");
  std::sort(m.sources.begin(), m.sources.end());
  std::sort(m.targets.begin(), m.targets.end());
  if (m.sources.empty()) throw ManifestError("field 'sources' is empty");
  if (m.targets.empty()) throw ManifestError("field 'targets' is empty");
  if (std::adjacent_find(m.sources.begin(), m.sources.end()) != m.sources.end()) {
    throw ManifestError("field 'sources' contains a duplicate id");
  }
  if (std::adjacent_find(m.targets.begin(), m.targets.end()) != m.targets.end()) {
    throw ManifestError("field 'targets' contains a duplicate id");
  }
  if (m.sources.size() > kMaxSources) {
    throw ManifestError("field 'sources' lists " + std::to_string(m.sources.size()) +
                        " ids; at most " + std::to_string(kMaxSources) + " are supported");
  }

  m.pool_size = number<std::size_t>(require(doc, "pool_size", "manifest"), "pool_size");
  if (m.pool_size < 1) throw ManifestError("field 'pool_size' must be at least 1");
  for (std::size_t t = 0; t < m.targets.size(); ++t) {
    const auto available = m.candidates(t).size();
    if (m.pool_size > available) {
      throw ManifestError("field 'pool_size' is " + std::to_string(m.pool_size) + " but target '" +
                          m.targets[t] + "' has only " + std::to_string(available) +
                          " candidate sources");
    }
  }

  if (auto it = doc.find("measures"); it != doc.end()) {
    std::set<Measure> chosen;
    for (const auto& s : string_list(*it, "measures")) {
      auto parsed = parse_measure(s);
      if (!parsed) throw ManifestError("field 'measures': unknown measure '" + s + "'");
      chosen.insert(*parsed);
    }
    if (chosen.empty()) throw ManifestError("field 'measures' is empty");
    m.measures.assign(chosen.begin(), chosen.end());
  } else {
    m.measures.assign(kAllMeasures.begin(), kAllMeasures.end());
  }

  if (auto it = doc.find("metrics"); it != doc.end()) {
    std::set<Metric> chosen;
    for (const auto& s : string_list(*it, "metrics")) {
      auto parsed = parse_metric(s);
      if (!parsed) throw ManifestError("field 'metrics': unknown metric '" + s + "'");
      chosen.insert(*parsed);
    }
    if (chosen.empty()) throw ManifestError("field 'metrics' is empty");
    m.metrics.assign(chosen.begin(), chosen.end());
  } else {
    m.metrics.assign(kDefaultMetrics.begin(), kDefaultMetrics.end());
  }
  const bool want_features = std::any_of(m.metrics.begin(), m.metrics.end(), needs_features);
  const bool want_predictions = std::any_of(m.metrics.begin(), m.metrics.end(), needs_predictions);

  const auto& acc = require(doc, "accuracies", "manifest");
  if (!acc.is_string()) throw ManifestError("field 'accuracies' must be a path string");
  m.accuracies = resolve(base_dir, acc.get<std::string>());

  const auto& pairs = require(doc, "pairs", "manifest");
  if (!pairs.is_array()) throw ManifestError("field 'pairs' must be a list");
  const std::set<std::string> source_set(m.sources.begin(), m.sources.end());
  const std::set<std::string> target_set(m.targets.begin(), m.targets.end());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& entry = pairs[i];
    const std::string where = "pairs[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw ManifestError(where + " must be an object");
    check_keys(entry, {"source", "target", "features", "predictions", "labels"}, where);
    PairPaths p;
    auto str = [&](const char* key, bool required) -> std::string {
      auto it = entry.find(key);
      if (it == entry.end()) {
        if (required) throw ManifestError(where + ": missing required field '" + key + "'");
        return {};
      }
      if (!it->is_string()) throw ManifestError(where + "." + key + " must be a string");
      return it->get<std::string>();
    };
    p.source = str("source", true);
    p.target = str("target", true);
    const std::string pair_name = where + " (" + p.source + ", " + p.target + ")";
    if (!source_set.contains(p.source)) {
      throw ManifestError(pair_name + ": unknown source '" + p.source + "'");
    }
    if (!target_set.contains(p.target)) {
      throw ManifestError(pair_name + ": unknown target '" + p.target + "'");
    }
    if (p.source == p.target) {
      throw ManifestError(pair_name + ": a dataset cannot be its own source");
    }
    const std::string features = str("features", want_features);
    const std::string predictions = str("predictions", want_predictions);
    const std::string labels = str("labels", true);
    if (!features.empty()) p.features = resolve(base_dir, features);
    if (!predictions.empty()) p.predictions = resolve(base_dir, predictions);
    p.labels = resolve(base_dir, labels);
    m.pairs.push_back(std::move(p));
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](const PairPaths& a, const PairPaths& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  for (std::size_t i = 1; i < m.pairs.size(); ++i) {
    if (m.pairs[i - 1].source == m.pairs[i].source && m.pairs[i - 1].target == m.pairs[i].target) {
      throw ManifestError("pairs: (" + m.pairs[i].source + ", " + m.pairs[i].target +
                          ") is declared more than once");
    }
  }
  for (std::size_t t = 0; t < m.targets.size(); ++t) {
    for (auto s : m.candidates(t)) {
      if (!m.find_pair(m.sources[s], m.targets[t])) {
        throw ManifestError("pairs: no data declared for (" + m.sources[s] + ", " +
                            m.targets[t] + ")");
      }
    }
  }

  if (auto it = doc.find("subsample"); it != doc.end()) {
    if (!it->is_object()) throw ManifestError("field 'subsample' must be an object");
    check_keys(*it, {"samples", "seed"}, "subsample");
    SubsampleConfig sc;
    if (auto s = it->find("samples"); s != it->end()) sc.samples = number<std::size_t>(*s, "subsample.samples");
    if (auto s = it->find("seed"); s != it->end()) sc.seed = number<std::uint64_t>(*s, "subsample.seed");
    if (sc.samples < 1) throw ManifestError("field 'subsample.samples' must be at least 1");
    m.subsample = sc;
  }

  if (auto it = doc.find("nleep"); it != doc.end()) {
    if (!it->is_object()) throw ManifestError("field 'nleep' must be an object");
    check_keys(*it, {"variance_fraction", "components", "tolerance", "max_iterations", "restarts"},
               "nleep");
    if (auto s = it->find("variance_fraction"); s != it->end()) {
      m.nleep.variance_fraction = number<double>(*s, "nleep.variance_fraction");
      if (!(m.nleep.variance_fraction > 0.0 && m.nleep.variance_fraction <= 1.0)) {
        throw ManifestError("field 'nleep.variance_fraction' must lie in (0, 1]");
      }
    }
    if (auto s = it->find("components"); s != it->end()) m.nleep.components = number<std::size_t>(*s, "nleep.components");
    if (auto s = it->find("tolerance"); s != it->end()) m.nleep.tolerance = number<double>(*s, "nleep.tolerance");
    if (auto s = it->find("max_iterations"); s != it->end()) m.nleep.max_iterations = number<int>(*s, "nleep.max_iterations");
    if (auto s = it->find("restarts"); s != it->end()) {
      m.nleep.restarts = number<std::size_t>(*s, "nleep.restarts");
      if (m.nleep.restarts < 1) throw ManifestError("field 'nleep.restarts' must be at least 1");
    }
  }

  if (auto it = doc.find("gbc"); it != doc.end()) {
    if (!it->is_object()) throw ManifestError("field 'gbc' must be an object");
    check_keys(*it, {"covariance"}, "gbc");
    if (auto s = it->find("covariance"); s != it->end()) {
      const auto mode = s->is_string() ? s->get<std::string>() : std::string();
      if (mode == "diagonal") m.gbc_covariance = CovarianceMode::kDiagonal;
      else if (mode == "spherical") m.gbc_covariance = CovarianceMode::kSpherical;
      else throw ManifestError("field 'gbc.covariance' must be 'diagonal' or 'spherical'");
    }
  }

  if (auto it = doc.find("seed"); it != doc.end()) m.seed = number<std::uint64_t>(*it, "seed");
  m.nleep.seed = m.seed;
  return m;
}

ScenarioManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  try {
    return parse_manifest(ss.str(), base);
  } catch (const ManifestError& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
}

void save_manifest(const ScenarioManifest& m, const std::filesystem::path& path) {
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  base = base.lexically_normal();
  json doc;
  doc["scenario"] = m.name;
  doc["sources"] = m.sources;
  doc["targets"] = m.targets;
  doc["pool_size"] = m.pool_size;
  doc["measures"] = json::array();
  for (auto x : m.measures) doc["measures"].push_back(std::string(to_string(x)));
  doc["metrics"] = json::array();
  for (auto x : m.metrics) doc["metrics"].push_back(std::string(to_string(x)));
  doc["accuracies"] = relative_to(m.accuracies, base);
  doc["pairs"] = json::array();
  for (const auto& p : m.pairs) {
    json e = {{"source", p.source}, {"target", p.target}, {"labels", relative_to(p.labels, base)}};
    if (!p.features.empty()) e["features"] = relative_to(p.features, base);
    if (!p.predictions.empty()) e["predictions"] = relative_to(p.predictions, base);
    doc["pairs"].push_back(std::move(e));
  }
  if (m.subsample) doc["subsample"] = {{"samples", m.subsample->samples}, {"seed", m.subsample->seed}};
  doc["nleep"] = {{"variance_fraction", m.nleep.variance_fraction},
                  {"components", m.nleep.components},
                  {"tolerance", m.nleep.tolerance},
                  {"max_iterations", m.nleep.max_iterations},
                  {"restarts", m.nleep.restarts}};
  doc["gbc"] = {{"covariance", m.gbc_covariance == CovarianceMode::kDiagonal ? "diagonal" : "spherical"}};
  doc["seed"] = m.seed;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace transtab
