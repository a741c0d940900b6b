// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "test_support.hpp"
#include "transtab/combinations.hpp"
#include "transtab/engine.hpp"
#include "transtab/metrics.hpp"
#include "transtab/scenario_gen.hpp"
#include "transtab/stability.hpp"

#ifdef TRANSTAB_HAVE_CLI
#include "transtab/cli.hpp"
#endif

namespace {

using namespace transtab;
namespace oracle = transtab::test::oracle;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// A cache over `sources` ids whose first `targets` entries double as targets,
// filled with seeded values (no data files involved).
MetricCache filled_cache(std::size_t sources, std::size_t targets, std::uint64_t seed) {
  std::vector<std::string> src;
  for (std::size_t i = 0; i < sources; ++i) src.push_back("ds" + std::to_string(100 + i));
  std::vector<std::string> tgt(src.begin(), src.begin() + static_cast<long>(targets));
  MetricCache cache(src, tgt, std::vector<Metric>(kDefaultMetrics.begin(), kDefaultMetrics.end()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t t = 0; t < targets; ++t) {
    for (auto s : cache.candidates(t)) {
      cache.set_accuracy(t, s, u(rng));
      for (std::size_t m = 0; m < cache.metrics().size(); ++m) cache.set_metric(m, t, s, u(rng));
    }
  }
  return cache;
}

// ---------------------------------------------------------------------------

Verdict criterion1() {
  Verdict v;
  const std::vector<Measure> measures(kAllMeasures.begin(), kAllMeasures.end());
  const MetricCache s1 = filled_cache(17, 17, 1);  // 17 datasets, pools of 11 out of 16
  const MetricCache s2 = filled_cache(20, 9, 2);   // 9 targets, pools of 14 out of 19
  const auto t0 = Clock::now();
  const auto x1 = enumerate_experiments(s1, 11, measures);
  const auto x2 = enumerate_experiments(s2, 14, measures);
  const double secs = seconds_since(t0);
  v.require(x1.size() == 297024, "scenario-1 count " + std::to_string(x1.size()));
  v.require(x2.size() == 418608, "scenario-2 count " + std::to_string(x2.size()));
  v.require(x1.size() + x2.size() == 715632, "total");
  v.require(expected_experiment_count(s1, 11, 4) == 297024, "closed form scenario-1");
  v.require(expected_experiment_count(s2, 14, 4) == 418608, "closed form scenario-2");
  v.require(secs < 10.0, "enumeration time " + fmt(secs) + " s");
  v.note(std::to_string(x1.size()) + " + " + std::to_string(x2.size()) + " = " +
         std::to_string(x1.size() + x2.size()) + " experiments, enumerated in " + fmt(secs, 3) +
         " s");
  return v;
}

// Six experiments: pool P1 with targets T1, T2, T3; pool P2 with T1, T2; pool
// P3 with T1 only. Target edges: (1,2) 0.2, (1,3) 0.1, (2,3) 0.2, (4,5) 0.3.
Verdict criterion2() {
  Verdict v;
  auto tau = [](const std::vector<double>& a, const std::vector<double>& b) {
    return static_cast<double>(oracle::kendall(a, b));
  };
  auto decode = [](int code) {
    std::vector<double> y(5);
    for (auto& e : y) {
      e = code % 5;
      code /= 5;
    }
    return y;
  };
  const std::vector<double> x1{0, 1, 2, 3, 4};
  std::vector<double> x2, x3;
  for (int a = 0; a < 3125 && x3.empty(); ++a) {
    const auto y = decode(a);
    if (std::abs(tau(x1, y) - 0.2) > 1e-12) continue;
    for (int b = 0; b < 3125; ++b) {
      const auto z = decode(b);
      if (std::abs(tau(x1, z) - 0.1) < 1e-12 && std::abs(tau(y, z) - 0.2) < 1e-12) {
        x2 = y;
        x3 = z;
        break;
      }
    }
  }
  std::vector<double> x5;
  for (int a = 0; a < 3125 && x5.empty(); ++a) {
    if (std::abs(tau(x1, decode(a)) - 0.3) < 1e-12) x5 = decode(a);
  }
  if (x3.empty() || x5.empty()) {
    v.require(false, "no outcome vectors with the required agreements");
    return v;
  }

  ExperimentSet xs;
  xs.scenario = "worked-example";
  xs.sources = {"IDD", "SUIM", "COCO", "VOC"};
  xs.targets = {"ADE20k", "CityScapes", "Pascal"};
  xs.metrics.assign(kDefaultMetrics.begin(), kDefaultMetrics.end());
  xs.measures = {Measure::kWeightedKendall};
  auto add = [&](std::uint64_t pool, std::uint32_t target, const std::vector<double>& q) {
    xs.experiments.push_back({pool, target, Measure::kWeightedKendall});
    xs.ids.push_back(xs.ids.size() + 1);
    xs.quality.insert(xs.quality.end(), q.begin(), q.end());
  };
  add(0b0011, 0, x1);  // XP1
  add(0b0011, 1, x2);  // XP2
  add(0b0011, 2, x3);
  add(0b0101, 0, x1);
  add(0b0101, 1, x5);
  add(0b1001, 0, x2);

  const auto target = setup_stability(xs, Component::kTarget, {PairMode::kExact, 0, 0}, 1);
  const auto a12 = agreement(xs.outcome(0), xs.outcome(1));
  v.require(target.total_pairs == 4, "target edges " + std::to_string(target.total_pairs));
  v.require(target.ss && std::abs(*target.ss - 0.2) < 1e-12, "SS(target)");
  v.require(a12 && std::abs(*a12 - 0.2) < 1e-12, "agreement(XP1, XP2)");
  v.note("SS(target) = " + (target.ss ? fmt(*target.ss, 17) : std::string("undefined")) +
         " over " + std::to_string(target.total_pairs) + " edges, agreement(XP1, XP2) = " +
         (a12 ? fmt(*a12, 17) : std::string("undefined")));
  return v;
}

Verdict criterion3() {
  Verdict v;
  std::mt19937_64 rng(20240);
  std::uniform_int_distribution<std::size_t> len(3, 30);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> coarse(0, 6);
  double worst_k = 0, worst_wk = 0, worst_p = 0;
  int rel_mismatch = 0, cases = 0;
  while (cases < 1000) {
    const std::size_t n = len(rng);
    const bool ties = cases % 4 == 0;
    std::vector<double> m(n), a(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = ties ? coarse(rng) : u(rng);
      a[i] = ties ? coarse(rng) / 6.0 : (u(rng) + 5.0) / 10.0;
    }
    auto flat = [](const std::vector<double>& s) {
      return std::all_of(s.begin(), s.end(), [&](double e) { return e == s[0]; });
    };
    if (flat(m) || flat(a) || *std::max_element(a.begin(), a.end()) <= 0) continue;
    ++cases;
    const PairedSeries s(m, a);
    worst_k = std::max(worst_k, std::abs(*kendall(s).value - (double)oracle::kendall(m, a)));
    worst_wk = std::max(worst_wk, std::abs(*weighted_kendall(s).value -
                                           (double)oracle::weighted_kendall(m, a)));
    worst_p = std::max(worst_p, std::abs(*pearson(s).value - (double)oracle::pearson(m, a)));
    rel_mismatch += *rel_at_1(s).value != oracle::rel_at_1(m, a);
  }
  v.require(worst_k <= 1e-12, "kendall deviation " + fmt(worst_k));
  v.require(worst_wk <= 1e-12, "weighted_kendall deviation " + fmt(worst_wk));
  v.require(worst_p <= 1e-10, "pearson deviation " + fmt(worst_p));
  v.require(rel_mismatch == 0, std::to_string(rel_mismatch) + " rel_at_1 mismatches");
  v.note("1000 series; max |dev| kendall " + fmt(worst_k, 3) + ", weighted " + fmt(worst_wk, 3) +
         ", pearson " + fmt(worst_p, 3) + "; rel_at_1 mismatches " + std::to_string(rel_mismatch));
  return v;
}

Verdict criterion4() {
  Verdict v;
  std::mt19937_64 rng(4);

  double leep_dev = 0;
  std::uniform_int_distribution<std::size_t> n_dist(2, 100), z_dist(2, 12);
  std::uniform_int_distribution<std::int32_t> c_dist(2, 8);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = n_dist(rng);
    const auto c = std::min<std::int32_t>(c_dist(rng), static_cast<std::int32_t>(n));
    const PredictionMatrix p = test::random_predictions(rng, n, z_dist(rng));
    const LabelVector y = test::random_labels(rng, n, c);
    leep_dev = std::max(leep_dev, std::abs(leep(p, y).value - (double)oracle::leep(p, y)));
  }
  v.require(leep_dev <= 1e-10, "LEEP deviation " + fmt(leep_dev));

  // Class 0 = {-1, 1}, class 1 = {0, 2}: means 0 and 1, unit variances.
  const double g = gbc(FeatureMatrix(Matrix(4, 1, {-1, 1, 0, 2})), LabelVector({0, 0, 1, 1})).value;
  const double g_expected = -std::exp(-1.0 / 8.0);
  // Closed form without the variance floor, and with it added to both variances.
  const double g_floor = -std::exp(-1.0 / (8.0 * (1.0 + kGbcVarianceFloor)));
  v.require(std::abs(g - g_expected) < 1e-6, "GBC closed form " + fmt(g, 10));
  v.require(std::abs(g - g_floor) < 1e-12, "GBC floored closed form " + fmt(g, 12));

  double h_dev = 0;
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 30 + 5 * i, d = 2 + i % 6;
    const Matrix base = test::random_matrix(rng, n, d);
    const LabelVector y = test::random_labels(rng, n, 2 + i % 4);
    std::vector<float> data(base.data().begin(), base.data().end());
    for (std::size_t r = 0; r < n; ++r) data[r * d] += static_cast<float>(y[r]);
    const FeatureMatrix f(Matrix(n, d, std::move(data)));
    const double expected = oracle::hscore(f, y, kHScoreRidgeScale);
    h_dev = std::max(h_dev, std::abs(hscore(f, y).value - expected) / std::max(1.0, std::abs(expected)));
  }
  v.require(h_dev <= 1e-8, "H-score deviation " + fmt(h_dev));

  // n = 6, d = 2, two classes: every one-hot column against the grid oracle.
  // A grid optimum on the box edge means the supremum lies outside the box, so
  // there the solver only has to reach the grid value.
  double logme_dev = 0;
  int logme_edge = 0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::MatrixXd f(6, 2);
    for (Eigen::Index r = 0; r < 6; ++r)
      for (Eigen::Index c = 0; c < 2; ++c) f(r, c) = gauss(rng) + (c == 0 && r % 2 ? 1.5 : 0.0);
    const LogMeSolver solver(f);
    for (int cls = 0; cls < 2; ++cls) {
      Eigen::VectorXd y(6);
      for (Eigen::Index r = 0; r < 6; ++r) y(r) = (r % 2) == cls ? 1.0 : 0.0;
      const LogMeColumn col = solver.solve(y);
      const auto grid = oracle::logme_grid(f, y);
      const bool edge = grid.alpha > 0.99e4 || grid.beta > 0.99e4 || grid.alpha < 1.01e-4 ||
                        grid.beta < 1.01e-4;
      logme_edge += edge;
      const double dev = edge ? std::max(0.0, grid.value - col.log_evidence)
                              : std::abs(col.log_evidence - grid.value);
      logme_dev = std::max(logme_dev, dev);
    }
  }
  v.require(logme_dev <= 1e-3, "LogME vs grid " + fmt(logme_dev));

  double nleep_perm = 0;
  bool nleep_det = true;
  for (int i = 0; i < 5; ++i) {
    const FeatureMatrix f(test::random_matrix(rng, 90, 5));
    const LabelVector y = test::random_labels(rng, 90, 3);
    NleepConfig cfg;
    cfg.seed = 11 + static_cast<std::uint64_t>(i);
    const double a = nleep(f, y, cfg).value;
    nleep_det = nleep_det && a == nleep(f, y, cfg).value;
    std::vector<std::size_t> perm(90);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    nleep_perm = std::max(nleep_perm,
                          std::abs(a - nleep(f.select_rows(perm), y.select(perm), cfg).value));
  }
  v.require(nleep_det, "NLEEP not seed-deterministic");
  v.require(nleep_perm <= 1e-8, "NLEEP permutation deviation " + fmt(nleep_perm));

  v.note("LEEP " + fmt(leep_dev, 2) + ", GBC " + fmt(g, 6) + " vs " + fmt(g_expected, 6) +
         ", H-score rel " + fmt(h_dev, 2) + ", LogME " + fmt(logme_dev, 2) + " (" +
         std::to_string(logme_edge) + "/40 columns with edge optimum)" + ", NLEEP perm " +
         fmt(nleep_perm, 2));
  return v;
}

SyntheticSpec planted_spec(double noise, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.scenario = "planted";
  spec.sources = 6;
  spec.targets = 4;
  spec.pool_size = 3;
  spec.samples_per_class = 200;
  spec.noise = noise;
  spec.seed = seed;
  return spec;
}

ExperimentSet run_synthetic(const SyntheticSpec& spec, MetricCache* cache_out = nullptr) {
  test::TempDir dir("transtab-accept");
  const ScenarioManifest m = generate_synthetic_scenario(spec, dir.path());
  MetricCache cache = build_cache(m);
  ExperimentSet xs = run_scenario(cache, m.name, m.pool_size, m.measures);
  if (cache_out) *cache_out = std::move(cache);
  return xs;
}

Verdict criterion5() {
  Verdict v;
  const auto t0 = Clock::now();
  const ExperimentSet xs = run_synthetic(planted_spec(0.0, 1));
  const double secs = seconds_since(t0);

  std::size_t rank_experiments = 0;
  std::vector<std::size_t> perfect(xs.metrics.size(), 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Measure e = xs.experiments[i].measure;
    if (e != Measure::kKendall && e != Measure::kWeightedKendall) continue;
    ++rank_experiments;
    for (std::size_t m = 0; m < xs.metrics.size(); ++m) perfect[m] += xs.outcome(i)[m] == 1.0;
  }
  std::string per_metric;
  for (std::size_t m = 0; m < xs.metrics.size(); ++m) {
    v.require(perfect[m] == rank_experiments,
              std::string(to_string(xs.metrics[m])) + " perfect in " + std::to_string(perfect[m]) +
                  "/" + std::to_string(rank_experiments));
    per_metric += std::string(per_metric.empty() ? "" : " ") + std::string(to_string(xs.metrics[m])) +
                  "=" + std::to_string(perfect[m]);
  }
  v.require(rank_experiments == 4 * binomial(5, 3) * 2, "experiment count");
  v.require(secs < 60.0, "sweep time " + fmt(secs) + " s");

  // Mean Kendall quality over metrics and experiments, averaged over seeds.
  const double sigmas[] = {0.0, 0.25, 0.5};
  double mean_q[3] = {0, 0, 0};
  const std::uint64_t seeds[] = {1, 2, 3};
  for (int k = 0; k < 3; ++k) {
    double sum = 0;
    std::size_t count = 0;
    for (auto seed : seeds) {
      const ExperimentSet ys = run_synthetic(planted_spec(sigmas[k], seed));
      for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys.experiments[i].measure != Measure::kKendall) continue;
        for (double q : ys.outcome(i)) {
          if (!std::isnan(q)) {
            sum += q;
            ++count;
          }
        }
      }
    }
    mean_q[k] = sum / static_cast<double>(count);
  }
  v.require(mean_q[0] >= mean_q[1] && mean_q[1] >= mean_q[2] && mean_q[2] < mean_q[0],
            "quality not monotone in noise");
  v.note("sigma=0: perfect tau/tau_w per metric (of " + std::to_string(rank_experiments) +
         ") " + per_metric + "; mean tau at sigma 0/0.25/0.5 = " + fmt(mean_q[0]) + "/" +
         fmt(mean_q[1]) + "/" + fmt(mean_q[2]) + "; sweep " + fmt(secs, 3) + " s");
  return v;
}

Verdict criterion6() {
  Verdict v;
  std::vector<std::int32_t> y;
  for (std::int32_t c = 0; c < 100; ++c) y.insert(y.end(), 3, c);
  const TargetSelectionData data{FeatureMatrix(), std::nullopt, LabelVector(y)};
  const std::vector<Metric> metrics{Metric::kNumC};
  double min_tau = 1.0;
  int undefined_fixed = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pool = sample_target_pool(TargetPoolSpec::uniform(seed, 0.02, 1.0), data.labels);
    const auto acc = class_count_accuracies(pool, 100, 0.0, seed + 100);
    const auto r = run_target_selection(pool, data, acc, metrics, Measure::kWeightedKendall);
    min_tau = std::min(min_tau, r.quality[0].value.value_or(-2.0));

    const auto fixed = sample_target_pool(TargetPoolSpec::fixed(seed, 0.5), data.labels);
    const auto acc_fixed = class_count_accuracies(fixed, 100, 0.0, seed + 100);
    const auto rf = run_target_selection(fixed, data, acc_fixed, metrics, Measure::kWeightedKendall);
    undefined_fixed += !rf.quality[0].defined();
  }
  v.require(min_tau >= 0.8, "uniform sampling min tau_w " + fmt(min_tau));
  v.require(undefined_fixed == 20, "fixed sampling undefined in " + std::to_string(undefined_fixed) + "/20");
  v.note("NumC min tau_w over 20 seeds (uniform 2-100%) = " + fmt(min_tau) +
         "; undefined under fixed 50% in " + std::to_string(undefined_fixed) + "/20");
  return v;
}

Verdict criterion7() {
  Verdict v;
  SyntheticSpec spec;
  spec.scenario = "sampling";
  spec.sources = 9;
  spec.targets = 5;
  spec.pool_size = 3;
  spec.samples_per_class = 40;
  spec.noise = 0.3;
  spec.seed = 7;
  const ExperimentSet xs = run_synthetic(spec);
  v.note(std::to_string(xs.size()) + " experiments");
  for (Component c : kAllComponents) {
    const auto exact = setup_stability(xs, c, {PairMode::kExact, 0, 0});
    const std::uint64_t budget = std::max<std::uint64_t>(1, exact.total_pairs / 10);
    double abs_err = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto s = setup_stability(xs, c, {PairMode::kSampled, budget, seed});
      abs_err += std::abs(s.ss.value_or(NAN) - exact.ss.value_or(NAN));
    }
    const double mae = abs_err / 20.0;
    v.require(exact.ss.has_value() && mae < 0.02,
              std::string(to_string(c)) + " MAE " + fmt(mae));
    v.note(std::string(to_string(c)) + ": exact " + fmt(exact.ss.value_or(NAN)) + ", pairs " +
           std::to_string(exact.total_pairs) + ", budget " + std::to_string(budget) + ", MAE " +
           fmt(mae, 3));
  }
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict criterion8() {
  Verdict v;
  test::TempDir dir("transtab-accept");
  SyntheticSpec spec;
  spec.sources = 7;
  spec.targets = 4;
  spec.pool_size = 3;
  spec.samples_per_class = 60;
  spec.noise = 0.2;
  spec.seed = 8;
  generate_synthetic_scenario(spec, dir / "data");
  const std::size_t many = std::max<std::size_t>(8, std::thread::hardware_concurrency());
  const std::vector<std::string> files{"experiments.csv", "summary.json", "cache.csv"};
  for (std::size_t workers : {std::size_t{1}, many}) {
    const auto out = dir / ("out" + std::to_string(workers));
#ifdef TRANSTAB_HAVE_CLI
    ::setenv("TRANSTAB_THREADS", std::to_string(workers).c_str(), 1);
    std::ostringstream sout, serr;
    const int code = cli::run({"scenario", "--manifest", (dir / "data" / "manifest.json").string(),
                               "--out", out.string()},
                              sout, serr);
    ::unsetenv("TRANSTAB_THREADS");
    v.require(code == cli::kExitOk, "scenario exit " + std::to_string(code) + ": " + serr.str());
#else
    const ScenarioManifest m = load_manifest(dir / "data" / "manifest.json");
    const MetricCache cache = build_cache(m, workers);
    const ExperimentSet xs = run_scenario(cache, m.name, m.pool_size, m.measures, workers);
    std::filesystem::create_directories(out);
    write_experiments_csv(xs, out / "experiments.csv");
    std::ofstream(out / "summary.json") << scenario_summary_json(xs, &cache, m.pool_size);
    write_cache_csv(cache, out / "cache.csv");
#endif
  }
  std::size_t bytes = 0;
  for (const auto& f : files) {
    const std::string a = slurp(dir / "out1" / f);
    const std::string b = slurp(dir / ("out" + std::to_string(many)) / f);
    v.require(!a.empty() && a == b, f + " differs");
    bytes += a.size();
  }
  v.note("1 vs " + std::to_string(many) + " workers: " + std::to_string(files.size()) +
         " export files, " + std::to_string(bytes) + " bytes, identical");
  return v;
}

Verdict criterion9() {
  Verdict v;
  test::TempDir dir("transtab-accept");
  struct Shape {
    const char* name;
    std::size_t sources, targets, pool;
  };
  const Shape shapes[] = {{"scenario1", 17, 17, 11}, {"scenario2", 20, 9, 14}};
  std::uint64_t total = 0;
  double secs = 0;
  std::uint64_t bytes = 0;
  for (const auto& shape : shapes) {
    SyntheticSpec spec;
    spec.scenario = shape.name;
    spec.sources = shape.sources;
    spec.targets = shape.targets;
    spec.pool_size = shape.pool;
    spec.samples_per_class = 25;
    spec.noise = 0.1;
    spec.seed = 9;
    const ScenarioManifest m = generate_synthetic_scenario(spec, dir / shape.name);
    const MetricCache cache = build_cache(m);
    std::uint64_t pairs = 0;
    for (std::size_t t = 0; t < cache.targets().size(); ++t) pairs += cache.candidates(t).size();
    v.require(cache.metric_evaluations == cache.metrics().size() * pairs,
              std::string(shape.name) + " metric evaluations " +
                  std::to_string(cache.metric_evaluations));

    const auto t0 = Clock::now();
    const ExperimentSet xs = run_scenario(cache, m.name, m.pool_size, m.measures);
    const auto path = dir / (std::string(shape.name) + ".csv");
    write_experiments_csv(xs, path);
    secs += seconds_since(t0);
    bytes += std::filesystem::file_size(path);
    std::filesystem::remove(path);
    total += xs.size();
    v.note(std::string(shape.name) + ": " + std::to_string(xs.size()) + " experiments, " +
           std::to_string(cache.metric_evaluations) + " metric evaluations (" +
           std::to_string(cache.metrics().size()) + " metrics x " + std::to_string(pairs) +
           " pairs)");
  }
  v.require(total == 715632, "experiment total " + std::to_string(total));
  v.require(secs < 600.0, "sweep time " + fmt(secs) + " s");
  v.note("sweep + export of " + std::to_string(total) + " experiments (" +
         std::to_string(bytes / (1024 * 1024)) + " MiB) in " + fmt(secs, 3) + " s on " +
         std::to_string(default_workers()) + " worker(s)");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "enumeration arithmetic", criterion1},
      {2, "worked setup-stability example", criterion2},
      {3, "measure oracles", criterion3},
      {4, "metric oracles", criterion4},
      {5, "planted-order recovery", criterion5},
      {6, "class-count bias in target pools", criterion6},
      {7, "sampled SS consistency", criterion7},
      {8, "determinism across worker counts", criterion8},
      {9, "full-sweep throughput", criterion9},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title
              << "): " << v.detail << " [" << fmt(seconds_since(t0), 3) << " s]" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
