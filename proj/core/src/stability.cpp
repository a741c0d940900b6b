#include "transtab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <unordered_set>

#include "transtab/measures.hpp"

namespace transtab {
namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  void merge(const CompensatedSum& o) {
    add(o.sum);
    add(o.carry);
  }
  double value() const { return sum + carry; }
};

struct Partial {
  CompensatedSum sum;
  std::uint64_t defined = 0;
  std::uint64_t undefined = 0;
};

void accumulate(Partial& p, const std::optional<double>& a) {
  if (a) {
    p.sum.add(*a);
    ++p.defined;
  } else {
    ++p.undefined;
  }
}

std::uint64_t row_offset(std::uint64_t i, std::uint64_t m) { return i * m - i * (i + 1) / 2; }

}  // namespace

std::string_view to_string(Component c) {
  switch (c) {
    case Component::kSourcePool: return "source_pool";
    case Component::kTarget: return "target";
    case Component::kMeasure: return "measure";
  }
  return "?";
}

std::optional<Component> parse_component(std::string_view s) {
  for (auto c : kAllComponents) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::optional<double> agreement(std::span<const double> first, std::span<const double> second) {
  constexpr std::size_t kStack = 32;
  double xa[kStack], ya[kStack];
  std::vector<double> xh, yh;
  double* x = xa;
  double* y = ya;
  if (first.size() > kStack) {
    xh.resize(first.size());
    yh.resize(first.size());
    x = xh.data();
    y = yh.data();
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < first.size() && i < second.size(); ++i) {
    if (std::isnan(first[i]) || std::isnan(second[i])) continue;
    x[n] = first[i];
    y[n] = second[i];
    ++n;
  }
  if (n < 2) return std::nullopt;
  return kendall_tau(std::span<const double>(x, n), std::span<const double>(y, n));
}

std::optional<double> agreement(const Outcome& first, const Outcome& second) {
  auto flat = [](const Outcome& o) {
    std::vector<double> v;
    for (const auto& q : o.quality) v.push_back(q ? *q : std::nan(""));
    return v;
  };
  const auto a = flat(first);
  const auto b = flat(second);
  return agreement(std::span<const double>(a), std::span<const double>(b));
}

EdgeIndex::EdgeIndex(const ExperimentSet& xs, Component component) {
  order_.resize(xs.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    const Experiment& e = xs.experiments[i];
    switch (component) {
      case Component::kTarget:
        return std::tuple(e.pool, std::uint64_t{static_cast<std::uint64_t>(e.measure)});
      case Component::kMeasure:
        return std::tuple(e.pool, std::uint64_t{e.target});
      case Component::kSourcePool:
        break;
    }
    return std::tuple(std::uint64_t{e.target}, std::uint64_t{static_cast<std::uint64_t>(e.measure)});
  };
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  group_start_.push_back(0);
  for (std::size_t p = 1; p < order_.size(); ++p) {
    if (key(order_[p]) != key(order_[p - 1])) group_start_.push_back(p);
  }
  group_start_.push_back(order_.size());
  if (order_.empty()) group_start_ = {0};

  pair_start_.push_back(0);
  for (std::size_t g = 0; g + 1 < group_start_.size(); ++g) {
    const std::uint64_t m = group_start_[g + 1] - group_start_[g];
    total_pairs_ += m * (m - 1) / 2;
    pair_start_.push_back(total_pairs_);
  }
}

std::pair<std::size_t, std::size_t> EdgeIndex::pair_at(std::uint64_t rank) const {
  const auto g = static_cast<std::size_t>(
      std::upper_bound(pair_start_.begin(), pair_start_.end(), rank) - pair_start_.begin() - 1);
  const std::uint64_t m = group_start_[g + 1] - group_start_[g];
  const std::uint64_t r = rank - pair_start_[g];
  std::uint64_t lo = 0, hi = m - 2;
  while (lo < hi) {
    const std::uint64_t mid = (lo + hi + 1) / 2;
    if (row_offset(mid, m) <= r) lo = mid;
    else hi = mid - 1;
  }
  const std::uint64_t j = lo + 1 + (r - row_offset(lo, m));
  return {order_[group_start_[g] + lo], order_[group_start_[g] + j]};
}

namespace {

std::vector<std::uint64_t> sample_ranks(std::uint64_t total, std::uint64_t budget,
                                        std::uint64_t seed) {
  // Floyd's algorithm: `budget` distinct values from [0, total).
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(budget * 2);
  for (std::uint64_t j = total - budget; j < total; ++j) {
    const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

EdgeSelection select_edges(const ExperimentSet& xs, Component component,
                           const EdgeOptions& options) {
  const EdgeIndex index(xs, component);
  EdgeSelection sel;
  sel.total_pairs = index.total_pairs();
  sel.exact = options.mode == PairMode::kExact || options.budget >= sel.total_pairs;
  if (sel.exact) {
    sel.pairs.reserve(sel.total_pairs);
    for (std::size_t g = 0; g < index.group_count(); ++g) {
      const auto members = index.group(g);
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          sel.pairs.emplace_back(members[i], members[j]);
        }
      }
    }
  } else {
    for (auto r : sample_ranks(sel.total_pairs, options.budget, options.seed)) {
      sel.pairs.push_back(index.pair_at(r));
    }
  }
  return sel;
}

std::vector<ExperimentEdge> build_edges(const ExperimentSet& xs, Component component,
                                        const EdgeOptions& options) {
  const auto sel = select_edges(xs, component, options);
  std::vector<ExperimentEdge> edges;
  edges.reserve(sel.pairs.size());
  for (auto [a, b] : sel.pairs) {
    edges.push_back({a, b, component, agreement(xs.outcome(a), xs.outcome(b))});
  }
  return edges;
}

std::optional<double> setup_stability(std::span<const ExperimentEdge> edges) {
  Partial p;
  for (const auto& e : edges) accumulate(p, e.agreement);
  if (p.defined == 0) return std::nullopt;
  return p.sum.value() / static_cast<double>(p.defined);
}

ComponentStability setup_stability(const ExperimentSet& xs, Component component,
                                   const EdgeOptions& options, std::size_t workers) {
  const EdgeIndex index(xs, component);
  ComponentStability out;
  out.component = component;
  out.total_pairs = index.total_pairs();
  out.exact = options.mode == PairMode::kExact || options.budget >= out.total_pairs;

  Partial total;
  if (out.exact) {
    // One task per (group, row): pairs (i, j > i) inside the group.
    struct Row {
      std::size_t group, i;
    };
    std::vector<Row> rows;
    for (std::size_t g = 0; g < index.group_count(); ++g) {
      const auto size = index.group(g).size();
      for (std::size_t i = 0; i + 1 < size; ++i) rows.push_back({g, i});
    }
    std::vector<Partial> partial(rows.size());
    parallel_for(rows.size(), workers, [&](std::size_t r) {
      const auto members = index.group(rows[r].group);
      const auto a = xs.outcome(members[rows[r].i]);
      for (std::size_t j = rows[r].i + 1; j < members.size(); ++j) {
        accumulate(partial[r], agreement(a, xs.outcome(members[j])));
      }
    });
    for (const auto& p : partial) {
      total.sum.merge(p.sum);
      total.defined += p.defined;
      total.undefined += p.undefined;
    }
  } else {
    const auto ranks = sample_ranks(out.total_pairs, options.budget, options.seed);
    constexpr std::size_t kChunk = 4096;
    const std::size_t tasks = (ranks.size() + kChunk - 1) / kChunk;
    std::vector<Partial> partial(tasks);
    parallel_for(tasks, workers, [&](std::size_t t) {
      const std::size_t end = std::min(ranks.size(), (t + 1) * kChunk);
      for (std::size_t r = t * kChunk; r < end; ++r) {
        const auto [a, b] = index.pair_at(ranks[r]);
        accumulate(partial[t], agreement(xs.outcome(a), xs.outcome(b)));
      }
    });
    for (const auto& p : partial) {
      total.sum.merge(p.sum);
      total.defined += p.defined;
      total.undefined += p.undefined;
    }
  }
  out.evaluated_pairs = total.defined + total.undefined;
  out.undefined_pairs = total.undefined;
  if (total.defined > 0) {
    out.ss = total.sum.value() / static_cast<double>(total.defined);
  } else if (out.total_pairs == 0) {
    out.note = "no experiment pairs differ only in " + std::string(to_string(component));
  } else {
    out.note = "every agreement was undefined (fewer than two shared defined metrics)";
  }
  return out;
}

StabilityReport stability_report(const ExperimentSet& xs, std::span<const Component> components,
                                 const EdgeOptions& options, std::size_t workers) {
  StabilityReport report;
  report.options = options;
  for (auto c : components) report.components.push_back(setup_stability(xs, c, options, workers));
  return report;
}

}  // namespace transtab
