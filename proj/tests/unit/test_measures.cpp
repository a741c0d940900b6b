#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "test_support.hpp"
#include "transtab/errors.hpp"
#include "transtab/measures.hpp"

namespace transtab {
namespace {

namespace oracle = test::oracle;

double value(MeasureValue v) {
  EXPECT_TRUE(v.defined());
  return v.value.value_or(std::nan(""));
}

PairedSeries series(std::vector<double> m, std::vector<double> a) {
  return PairedSeries(std::move(m), std::move(a));
}

TEST(Measures, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(value(pearson(series({1, 2, 3}, {2, 4, 6}))), 1.0);
  EXPECT_DOUBLE_EQ(value(pearson(series({1, 2, 3}, {6, 4, 2}))), -1.0);
  EXPECT_NEAR(value(pearson(series({1, 2, 3, 4}, {1, 3, 2, 4}))), 0.8, 1e-12);

  EXPECT_DOUBLE_EQ(value(kendall(series({1, 2, 3, 4, 5}, {2, 3, 5, 7, 11}))), 1.0);
  EXPECT_DOUBLE_EQ(value(kendall(series({1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}))), -1.0);
  EXPECT_NEAR(value(kendall(series({1, 2, 3, 4}, {1, 3, 2, 4}))), 4.0 / 6.0, 1e-15);

  EXPECT_DOUBLE_EQ(value(weighted_kendall(series({1, 2, 3, 4}, {10, 20, 30, 40}))), 1.0);
  EXPECT_DOUBLE_EQ(value(weighted_kendall(series({1, 2, 3, 4}, {40, 30, 20, 10}))), -1.0);

  EXPECT_DOUBLE_EQ(value(rel_at_1(series({3, 1}, {0.5, 0.8}))), 0.625);
  EXPECT_DOUBLE_EQ(value(rel_at_1(series({1, 9, 2}, {0.1, 0.9, 0.3}))), 1.0);
  EXPECT_DOUBLE_EQ(value(rel_at_1(series({4, 9, 2}, {0.7, 0.7, 0.7}))), 1.0);
}

TEST(Measures, DegenerateInputsAreUndefined) {
  EXPECT_FALSE(pearson(series({1, 1, 1}, {1, 2, 3})).defined());
  EXPECT_FALSE(pearson(series({1, 2, 3}, {2, 2, 2})).defined());
  EXPECT_FALSE(kendall(series({5, 5, 5}, {1, 2, 3})).defined());
  EXPECT_FALSE(weighted_kendall(series({5, 5, 5}, {1, 2, 3})).defined());
  EXPECT_FALSE(rel_at_1(series({1, 2}, {0, 0})).defined());
  EXPECT_THROW(series({1}, {1}), ValidationError);
  EXPECT_THROW(series({1, 2}, {1}), ValidationError);
  EXPECT_THROW(series({1, std::nan("")}, {1, 2}), ValidationError);
}

TEST(Measures, RelAt1TiesGoToLowestIndex) {
  EXPECT_DOUBLE_EQ(value(rel_at_1(series({5, 5, 1}, {0.4, 0.8, 0.2}))), 0.5);
}

// Random series with frequent ties in both M and A.
std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, bool coarse) {
  std::vector<double> v(n);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> k(0, 4);
  for (auto& x : v) x = coarse ? k(rng) : u(rng);
  return v;
}

TEST(Measures, AgreeWithPairwiseOraclesOnRandomSeries) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(3, 30);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = len(rng);
    const auto m = random_series(rng, n, trial % 3 == 0);
    const auto a = random_series(rng, n, trial % 5 == 0);
    const PairedSeries s(m, a);
    const auto k = kendall(s), wk = weighted_kendall(s), p = pearson(s), r = rel_at_1(s);
    const bool flat = std::all_of(m.begin(), m.end(), [&](double x) { return x == m[0]; }) ||
                      std::all_of(a.begin(), a.end(), [&](double x) { return x == a[0]; });
    if (flat) {
      EXPECT_FALSE(k.defined());
      continue;
    }
    ++compared;
    EXPECT_NEAR(*k.value, static_cast<double>(oracle::kendall(m, a)), 1e-12);
    EXPECT_NEAR(*wk.value, static_cast<double>(oracle::weighted_kendall(m, a)), 1e-12);
    EXPECT_NEAR(*p.value, static_cast<double>(oracle::pearson(m, a)), 1e-10);
    if (*std::max_element(a.begin(), a.end()) > 0) {
      EXPECT_EQ(*r.value, oracle::rel_at_1(m, a));
    }
  }
  EXPECT_GT(compared, 900);
}

TEST(Measures, RankMeasuresInvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_series(rng, 12, false);
    const auto a = random_series(rng, 12, false);
    std::vector<double> m2(m.size()), a2(a.size());
    std::transform(m.begin(), m.end(), m2.begin(), [](double x) { return std::exp(x) + 3.0; });
    std::transform(a.begin(), a.end(), a2.begin(), [](double x) { return x * x * x - 1.0; });
    const PairedSeries s(m, a), t(m2, a2);
    EXPECT_DOUBLE_EQ(*kendall(s).value, *kendall(t).value);
    EXPECT_DOUBLE_EQ(*weighted_kendall(s).value, *weighted_kendall(t).value);
    // Rel@1 only sees M through its argmax.
    const PairedSeries u(m2, a);
    EXPECT_DOUBLE_EQ(*rel_at_1(s).value, *rel_at_1(u).value);
    // Pearson under positive affine maps.
    std::vector<double> m3(m.size());
    std::transform(m.begin(), m.end(), m3.begin(), [](double x) { return 2.5 * x - 7.0; });
    EXPECT_NEAR(*pearson(s).value, *pearson(PairedSeries(m3, a)).value, 1e-12);
  }
}

TEST(Measures, JointPermutationSymmetry) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = random_series(rng, 9, false);
    auto a = random_series(rng, 9, false);
    const PairedSeries s(m, a);
    std::vector<std::size_t> perm(9);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pm(9), pa(9);
    for (std::size_t i = 0; i < 9; ++i) {
      pm[i] = m[perm[i]];
      pa[i] = a[perm[i]];
    }
    const PairedSeries t(pm, pa);
    for (Measure measure : kAllMeasures) {
      EXPECT_NEAR(*evaluate_measure(measure, s).value, *evaluate_measure(measure, t).value, 1e-12)
          << to_string(measure);
    }
  }
}

TEST(Measures, TwoElementSeriesGiveSignAgreement) {
  EXPECT_DOUBLE_EQ(*kendall(series({1, 2}, {3, 4})).value, 1.0);
  EXPECT_DOUBLE_EQ(*weighted_kendall(series({1, 2}, {3, 4})).value, 1.0);
  EXPECT_DOUBLE_EQ(*kendall(series({1, 2}, {4, 3})).value, -1.0);
  EXPECT_DOUBLE_EQ(*weighted_kendall(series({1, 2}, {4, 3})).value, -1.0);
}

TEST(Measures, SymmetrizedWeightedKendallAveragesBothRankings) {
  std::mt19937_64 rng(5);
  MeasureOptions sym;
  sym.symmetric_weighted_kendall = true;
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_series(rng, 10, false);
    const auto a = random_series(rng, 10, false);
    const double expected =
        0.5 * static_cast<double>(oracle::weighted_kendall(m, a) + oracle::weighted_kendall(a, m));
    EXPECT_NEAR(*weighted_kendall(PairedSeries(m, a), sym).value, expected, 1e-12);
  }
}

TEST(Measures, WeightedKendallEmphasisesTopRanks) {
  // Swapping the two best-by-A entries costs more than swapping the two worst.
  const std::vector<double> a{0.9, 0.8, 0.3, 0.2, 0.1};
  const double top = *weighted_kendall(series({4, 5, 3, 2, 1}, a)).value;
  const double bottom = *weighted_kendall(series({5, 4, 3, 1, 2}, a)).value;
  EXPECT_LT(top, bottom);
  EXPECT_DOUBLE_EQ(*kendall(series({4, 5, 3, 2, 1}, a)).value,
                   *kendall(series({5, 4, 3, 1, 2}, a)).value);
}

TEST(KendallTau, TiesAndConstantsContributeZero) {
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
  EXPECT_EQ(kendall_tau(x, y), 0.0);
  const std::vector<double> p{0.2, 0.5, 0.5, 0.9}, q{1, 2, 3, 4};
  EXPECT_NEAR(kendall_tau(p, q), 5.0 / 6.0, 1e-15);
}

}  // namespace
}  // namespace transtab
