#include "transtab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "transtab/errors.hpp"

namespace transtab {
namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool constant(std::span<const double> v) {
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

std::optional<double> pearson_impl(std::span<const double> m, std::span<const double> a) {
  if (constant(m) || constant(a)) return std::nullopt;
  const double n = static_cast<double>(m.size());
  const double mean_m = std::accumulate(m.begin(), m.end(), 0.0) / n;
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double dx = m[i] - mean_m;
    const double dy = a[i] - mean_a;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0 && syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> kendall_impl(std::span<const double> m, std::span<const double> a) {
  if (constant(m) || constant(a)) return std::nullopt;
  return kendall_tau(m, a);
}

// Zero-based rank of every entry by decreasing value; ties keep index order.
void ranks_descending(std::span<const double> v, std::span<std::size_t> rank,
                      std::span<std::size_t> scratch) {
  std::iota(scratch.begin(), scratch.end(), std::size_t{0});
  std::stable_sort(scratch.begin(), scratch.end(),
                   [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
  for (std::size_t r = 0; r < scratch.size(); ++r) rank[scratch[r]] = r;
}

double weighted_tau_by(std::span<const double> m, std::span<const double> a,
                       std::span<const std::size_t> rank) {
  double num = 0.0;
  double den = 0.0;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = hyperbolic_weight(rank[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = wi + hyperbolic_weight(rank[j]);
      num += w * sign(m[i] - m[j]) * sign(a[i] - a[j]);
      den += w;
    }
  }
  return num / den;
}

std::optional<double> weighted_kendall_impl(std::span<const double> m, std::span<const double> a,
                                            const MeasureOptions& opt) {
  if (constant(m) || constant(a)) return std::nullopt;
  constexpr std::size_t kStack = 64;
  std::size_t rank_buf[kStack], scratch_buf[kStack];
  std::vector<std::size_t> rank_heap, scratch_heap;
  std::span<std::size_t> rank, scratch;
  if (m.size() <= kStack) {
    rank = std::span<std::size_t>(rank_buf, m.size());
    scratch = std::span<std::size_t>(scratch_buf, m.size());
  } else {
    rank_heap.resize(m.size());
    scratch_heap.resize(m.size());
    rank = rank_heap;
    scratch = scratch_heap;
  }
  ranks_descending(a, rank, scratch);
  double tau = weighted_tau_by(m, a, rank);
  if (opt.symmetric_weighted_kendall) {
    ranks_descending(m, rank, scratch);
    tau = 0.5 * (tau + weighted_tau_by(m, a, rank));
  }
  return std::clamp(tau, -1.0, 1.0);
}

std::optional<double> rel_at_1_impl(std::span<const double> m, std::span<const double> a) {
  const auto best_a = *std::max_element(a.begin(), a.end());
  if (!(best_a > 0.0)) return std::nullopt;
  // max_element returns the first maximum: ties go to the lowest index.
  const auto pick = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
  return a[pick] / best_a;
}

}  // namespace

PairedSeries::PairedSeries(std::vector<double> metric_values, std::vector<double> accuracies)
    : m_(std::move(metric_values)), a_(std::move(accuracies)) {
  if (m_.size() != a_.size()) {
    throw ValidationError("paired series lengths differ: " + std::to_string(m_.size()) + " vs " +
                          std::to_string(a_.size()));
  }
  if (m_.size() < 2) throw ValidationError("paired series needs at least two entries");
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (!std::isfinite(m_[i]) || !std::isfinite(a_[i])) {
      throw ValidationError("paired series entry " + std::to_string(i) + " is not finite");
    }
  }
}

double hyperbolic_weight(std::size_t rank) { return 1.0 / (static_cast<double>(rank) + 1.0); }

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  long long sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += sign(x[i] - x[j]) * sign(y[i] - y[j]);
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(sum) / pairs;
}

std::optional<double> evaluate_measure(Measure measure, std::span<const double> m,
                                       std::span<const double> a, const MeasureOptions& opt) {
  if (m.size() != a.size()) throw ValidationError("paired series lengths differ");
  if (m.size() < 2) return std::nullopt;
  switch (measure) {
    case Measure::kPearson: return pearson_impl(m, a);
    case Measure::kKendall: return kendall_impl(m, a);
    case Measure::kWeightedKendall: return weighted_kendall_impl(m, a, opt);
    case Measure::kRelAt1: return rel_at_1_impl(m, a);
  }
  return std::nullopt;
}

MeasureValue evaluate_measure(Measure measure, const PairedSeries& s, const MeasureOptions& opt) {
  return {measure, evaluate_measure(measure, s.metric_values(), s.accuracies(), opt)};
}

MeasureValue pearson(const PairedSeries& s) { return evaluate_measure(Measure::kPearson, s); }
MeasureValue kendall(const PairedSeries& s) { return evaluate_measure(Measure::kKendall, s); }
MeasureValue weighted_kendall(const PairedSeries& s, const MeasureOptions& opt) {
  return evaluate_measure(Measure::kWeightedKendall, s, opt);
}
MeasureValue rel_at_1(const PairedSeries& s) { return evaluate_measure(Measure::kRelAt1, s); }

}  // namespace transtab
