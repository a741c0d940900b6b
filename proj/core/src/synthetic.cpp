#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "transtab/errors.hpp"
#include "transtab/io.hpp"
#include "transtab/scenario_gen.hpp"

namespace transtab {
namespace {

using json = nlohmann::json;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                          std::uint64_t b = 0) {
  return splitmix(splitmix(splitmix(splitmix(seed) ^ tag) ^ a) ^ b);
}

std::vector<std::string> make_ids(char prefix, std::size_t count) {
  std::size_t width = 2;
  for (std::size_t v = count > 0 ? count - 1 : 0; v >= 100; v /= 10) ++width;
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string n = std::to_string(i);
    ids.push_back(prefix + std::string(width - std::min(width, n.size()), '0') + n);
  }
  return ids;
}

std::size_t candidate_count(const SyntheticSpec& spec) {
  return spec.disjoint_targets ? spec.sources : spec.sources - 1;
}

// Per-target draws shared by every source: unit class directions and noise.
struct TargetDraw {
  Eigen::MatrixXd directions;  // C x d
  Eigen::MatrixXd noise;       // n x d
  std::vector<std::int32_t> labels;
};

TargetDraw draw_target(const SyntheticSpec& spec, std::size_t target) {
  std::mt19937_64 rng(derive_seed(spec.seed, 1, target));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto c = static_cast<Eigen::Index>(spec.classes);
  const auto d = static_cast<Eigen::Index>(spec.feature_dim);
  TargetDraw draw;

  Eigen::MatrixXd g(d, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = gauss(rng);
  if (c <= d) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, c);
    draw.directions = q.transpose();
  } else {
    draw.directions = g.transpose();
    for (Eigen::Index k = 0; k < c; ++k) draw.directions.row(k).normalize();
  }

  const std::size_t n = spec.classes * spec.samples_per_class;
  draw.noise.resize(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index r = 0; r < draw.noise.rows(); ++r)
    for (Eigen::Index j = 0; j < d; ++j) draw.noise(r, j) = gauss(rng);
  draw.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    draw.labels[i] = static_cast<std::int32_t>(i / spec.samples_per_class);
  }
  return draw;
}

SyntheticCell build_cell(const SyntheticSpec& spec, const TargetDraw& draw, std::size_t target,
                         std::size_t source) {
  const double sep = synthetic_separation(spec, target, source);
  const auto n = draw.noise.rows();
  const auto d = draw.noise.cols();
  Eigen::MatrixXd x = draw.noise;
  for (Eigen::Index r = 0; r < n; ++r) x.row(r) += sep * draw.directions.row(draw.labels[r]);

  const std::size_t z = spec.source_classes == 0 ? spec.classes : spec.source_classes;
  Eigen::MatrixXd anchors(static_cast<Eigen::Index>(z), d);
  for (std::size_t k = 0; k < z; ++k) {
    anchors.row(static_cast<Eigen::Index>(k)) =
        sep * draw.directions.row(static_cast<Eigen::Index>(k % spec.classes));
  }
  Eigen::MatrixXd p(n, static_cast<Eigen::Index>(z));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      p(r, k) = -0.5 * (x.row(r) - anchors.row(k)).squaredNorm();
    }
    const double top = p.row(r).maxCoeff();
    p.row(r) = (p.row(r).array() - top).exp().matrix();
    p.row(r) /= p.row(r).sum();
  }

  // Renormalise after the float32 cast so rows still sum to one.
  std::vector<float> pf(static_cast<std::size_t>(p.size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      auto& v = pf[static_cast<std::size_t>(r * p.cols() + k)];
      v = static_cast<float>(p(r, k));
      sum += v;
    }
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      auto& v = pf[static_cast<std::size_t>(r * p.cols() + k)];
      v = static_cast<float>(v / sum);
    }
  }

  return SyntheticCell{FeatureMatrix(Matrix::from_eigen(x)),
                       PredictionMatrix(Matrix(static_cast<std::size_t>(n), z, std::move(pf))),
                       LabelVector(draw.labels, static_cast<std::int32_t>(spec.classes)), sep,
                       synthetic_accuracy(spec, target, source)};
}

template <typename T>
T read_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError("synthetic spec: field '" + field + "' must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0 &&
                                   !v.is_number_unsigned())) {
      throw ValidationError("synthetic spec: field '" + field + "' must be a non-negative integer");
    }
  }
  return v.get<T>();
}

}  // namespace

void validate(const SyntheticSpec& s) {
  auto fail = [](const std::string& msg) { throw ValidationError("synthetic spec: " + msg); };
  if (s.scenario.empty()) fail("'scenario' must not be empty");
  if (s.sources < 2) fail("'sources' must be at least 2");
  if (s.sources > kMaxSources) fail("'sources' must be at most " + std::to_string(kMaxSources));
  if (s.targets < 1) fail("'targets' must be at least 1");
  if (!s.disjoint_targets && s.targets > s.sources) {
    fail("'targets' exceeds 'sources' while disjoint_targets is false");
  }
  if (s.pool_size < 1 || s.pool_size > candidate_count(s)) {
    fail("'pool_size' must lie in [1, " + std::to_string(candidate_count(s)) + "]");
  }
  if (s.feature_dim < 1) fail("'feature_dim' must be at least 1");
  if (s.classes < 2) fail("'classes' must be at least 2");
  if (s.samples_per_class < 2) fail("'samples_per_class' must be at least 2");
  if (!(std::isfinite(s.separation_min) && s.separation_min >= 0.0)) {
    fail("'separation_min' must be finite and >= 0");
  }
  if (!(std::isfinite(s.separation_max) && s.separation_max >= s.separation_min)) {
    fail("'separation_max' must be finite and >= separation_min");
  }
  if (!(std::isfinite(s.noise) && s.noise >= 0.0)) fail("'noise' must be finite and >= 0");
  if (s.metrics.empty()) fail("'metrics' must not be empty");
  if (s.measures.empty()) fail("'measures' must not be empty");
}

SyntheticSpec parse_synthetic_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("synthetic spec: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("synthetic spec: top level must be an object");
  static const std::set<std::string> allowed{
      "scenario", "sources",       "targets",        "disjoint_targets", "pool_size",
      "feature_dim", "classes",    "samples_per_class", "source_classes", "separation_min",
      "separation_max", "noise",   "link",           "seed",             "metrics",
      "measures"};
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw ValidationError("synthetic spec: unknown field '" + key + "'");
  }

  SyntheticSpec s;
  auto size_field = [&](const char* key, std::size_t& out) {
    if (auto it = doc.find(key); it != doc.end()) out = read_number<std::size_t>(*it, key);
  };
  auto real_field = [&](const char* key, double& out) {
    if (auto it = doc.find(key); it != doc.end()) out = read_number<double>(*it, key);
  };
  if (auto it = doc.find("scenario"); it != doc.end()) {
    if (!it->is_string()) throw ValidationError("synthetic spec: field 'scenario' must be a string");
    s.scenario = it->get<std::string>();
  }
  size_field("sources", s.sources);
  size_field("targets", s.targets);
  size_field("pool_size", s.pool_size);
  size_field("feature_dim", s.feature_dim);
  size_field("classes", s.classes);
  size_field("samples_per_class", s.samples_per_class);
  size_field("source_classes", s.source_classes);
  real_field("separation_min", s.separation_min);
  real_field("separation_max", s.separation_max);
  real_field("noise", s.noise);
  if (auto it = doc.find("disjoint_targets"); it != doc.end()) {
    if (!it->is_boolean()) {
      throw ValidationError("synthetic spec: field 'disjoint_targets' must be a boolean");
    }
    s.disjoint_targets = it->get<bool>();
  }
  if (auto it = doc.find("link"); it != doc.end()) {
    const std::string v = it->is_string() ? it->get<std::string>() : "";
    if (v == "tanh") {
      s.link = AccuracyLink::kTanh;
    } else if (v == "linear") {
      s.link = AccuracyLink::kLinear;
    } else {
      throw ValidationError("synthetic spec: field 'link' must be \"tanh\" or \"linear\"");
    }
  }
  if (auto it = doc.find("seed"); it != doc.end()) s.seed = read_number<std::uint64_t>(*it, "seed");
  if (auto it = doc.find("metrics"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("synthetic spec: field 'metrics' must be an array");
    std::set<Metric> seen;
    for (const auto& v : *it) {
      auto m = v.is_string() ? parse_metric(v.get<std::string>()) : std::nullopt;
      if (!m) throw ValidationError("synthetic spec: unknown metric " + v.dump());
      seen.insert(*m);
    }
    s.metrics.assign(seen.begin(), seen.end());
  }
  if (auto it = doc.find("measures"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("synthetic spec: field 'measures' must be an array");
    std::set<Measure> seen;
    for (const auto& v : *it) {
      auto m = v.is_string() ? parse_measure(v.get<std::string>()) : std::nullopt;
      if (!m) throw ValidationError("synthetic spec: unknown measure " + v.dump());
      seen.insert(*m);
    }
    s.measures.assign(seen.begin(), seen.end());
  }
  validate(s);
  return s;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open synthetic spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_synthetic_spec(buf.str());
}

std::vector<std::string> synthetic_source_ids(const SyntheticSpec& spec) {
  return make_ids('d', spec.sources);
}

std::vector<std::string> synthetic_target_ids(const SyntheticSpec& spec) {
  if (spec.disjoint_targets) return make_ids('t', spec.targets);
  auto ids = make_ids('d', spec.sources);
  ids.resize(spec.targets);
  return ids;
}

double synthetic_separation(const SyntheticSpec& spec, std::size_t target, std::size_t source) {
  if (target >= spec.targets || source >= spec.sources) {
    throw ValidationError("synthetic separation: index out of range");
  }
  if (!spec.disjoint_targets && source == target) {
    throw ValidationError("synthetic separation: source equals target");
  }
  const std::size_t k = candidate_count(spec);
  const std::size_t pos = (!spec.disjoint_targets && source > target) ? source - 1 : source;
  std::vector<std::size_t> rank(k);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::mt19937_64 rng(derive_seed(spec.seed, 2, target));
  for (std::size_t i = k; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(rank[i - 1], rank[pick(rng)]);
  }
  if (k == 1) return spec.separation_max;
  const double f = static_cast<double>(rank[pos]) / static_cast<double>(k - 1);
  return spec.separation_min + f * (spec.separation_max - spec.separation_min);
}

double synthetic_accuracy(const SyntheticSpec& spec, std::size_t target, std::size_t source) {
  const double sep = synthetic_separation(spec, target, source);
  double a = 0.0;
  if (spec.link == AccuracyLink::kTanh) {
    a = 0.5 + 0.45 * std::tanh(sep);
  } else {
    const double span = spec.separation_max - spec.separation_min;
    a = 0.1 + 0.8 * (span > 0.0 ? (sep - spec.separation_min) / span : 1.0);
  }
  if (spec.noise > 0.0) {
    std::mt19937_64 rng(derive_seed(spec.seed, 3, target, source));
    a += spec.noise * std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  return std::clamp(a, 0.0, 1.0);
}

SyntheticCell synthesize_cell(const SyntheticSpec& spec, std::size_t target, std::size_t source) {
  validate(spec);
  return build_cell(spec, draw_target(spec, target), target, source);
}

ScenarioManifest generate_synthetic_scenario(const SyntheticSpec& spec,
                                             const std::filesystem::path& out_dir,
                                             std::size_t workers) {
  validate(spec);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "data", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "data").string() + ": " + ec.message());

  const auto source_ids = synthetic_source_ids(spec);
  const auto target_ids = synthetic_target_ids(spec);

  ScenarioManifest m;
  m.name = spec.scenario;
  m.sources = source_ids;
  m.targets = target_ids;
  std::sort(m.targets.begin(), m.targets.end());
  m.pool_size = spec.pool_size;
  m.metrics = spec.metrics;
  m.measures = spec.measures;
  m.accuracies = out_dir / "accuracies.csv";
  m.seed = spec.seed;
  m.nleep.seed = spec.seed;

  struct Cell {
    std::size_t target;
    std::size_t source;
  };
  std::vector<Cell> cells;
  TransferTable table;
  for (std::size_t t = 0; t < spec.targets; ++t) {
    for (std::size_t s = 0; s < spec.sources; ++s) {
      if (!spec.disjoint_targets && s == t) continue;
      cells.push_back({t, s});
      table.add(source_ids[s], target_ids[t], synthetic_accuracy(spec, t, s));
      const std::string stem = source_ids[s] + "__" + target_ids[t];
      m.pairs.push_back(PairPaths{source_ids[s], target_ids[t],
                                  out_dir / "data" / (stem + ".features.tmx"),
                                  out_dir / "data" / (stem + ".predictions.tmx"),
                                  out_dir / "data" / (target_ids[t] + ".labels.txt")});
    }
  }
  std::sort(m.pairs.begin(), m.pairs.end(), [](const PairPaths& a, const PairPaths& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });

  std::vector<TargetDraw> draws(spec.targets);
  parallel_for(spec.targets, workers, [&](std::size_t t) {
    draws[t] = draw_target(spec, t);
    write_labels(LabelVector(draws[t].labels, static_cast<std::int32_t>(spec.classes)),
                 out_dir / "data" / (target_ids[t] + ".labels.txt"));
  });
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    const auto [t, s] = cells[i];
    const SyntheticCell cell = build_cell(spec, draws[t], t, s);
    const std::string stem = source_ids[s] + "__" + target_ids[t];
    write_matrix(cell.features.matrix(), out_dir / "data" / (stem + ".features.tmx"));
    write_matrix(cell.predictions.matrix(), out_dir / "data" / (stem + ".predictions.tmx"));
  });

  write_transfer_table(table, m.accuracies);
  save_manifest(m, out_dir / "manifest.json");
  return load_manifest(out_dir / "manifest.json");
}

}  // namespace transtab
