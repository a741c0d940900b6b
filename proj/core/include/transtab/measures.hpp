#pragma once

#include <optional>
#include <span>
#include <vector>

#include "transtab/names.hpp"

namespace transtab {

// Metric values M_i paired with true accuracies A_i over one source pool.
class PairedSeries {
 public:
  // Throws ValidationError unless both series are finite, of equal length
  // and hold at least two entries.
  PairedSeries(std::vector<double> metric_values, std::vector<double> accuracies);

  std::span<const double> metric_values() const { return m_; }
  std::span<const double> accuracies() const { return a_; }
  std::size_t size() const { return m_.size(); }

 private:
  std::vector<double> m_;
  std::vector<double> a_;
};

// An unset value means the measure is undefined for the input (a constant
// series, or no positive accuracy for Rel@1).
struct MeasureValue {
  Measure measure;
  std::optional<double> value;

  bool defined() const { return value.has_value(); }
};

struct MeasureOptions {
  // Average the weighted tau over the rankings induced by A and by M instead
  // of weighting by the A ranking alone.
  bool symmetric_weighted_kendall = false;
};

MeasureValue pearson(const PairedSeries& s);
MeasureValue kendall(const PairedSeries& s);
MeasureValue weighted_kendall(const PairedSeries& s, const MeasureOptions& opt = {});
MeasureValue rel_at_1(const PairedSeries& s);
MeasureValue evaluate_measure(Measure measure, const PairedSeries& s, const MeasureOptions& opt = {});

// Allocation-light forms used on the experiment hot path. Spans must have
// equal length; fewer than two entries yields an undefined value.
std::optional<double> evaluate_measure(Measure measure, std::span<const double> metric_values,
                                       std::span<const double> accuracies,
                                       const MeasureOptions& opt = {});

// Literal signed-pair average over C(n,2) pairs; ties contribute zero and
// constant inputs give 0. This is the agreement statistic between outcomes.
double kendall_tau(std::span<const double> x, std::span<const double> y);

// Hyperbolic weight 1/(r+1) for zero-based rank r.
double hyperbolic_weight(std::size_t rank);

}  // namespace transtab
