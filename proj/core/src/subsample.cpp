#include <algorithm>
#include <numeric>
#include <random>

#include "transtab/metrics.hpp"

namespace transtab {

// Systematic probability-proportional-to-size sampling over a seeded random
// ordering. Inclusion probabilities are c / freq(class), capped at one, with
// c chosen so that they sum to n_keep.
std::vector<std::size_t> balanced_subsample_indices(const LabelVector& labels,
                                                    std::size_t n_keep, std::uint64_t seed) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (n_keep >= n) return all;
  if (n_keep == 0) return {};

  const auto freq = labels.class_frequencies();
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = 1.0 / static_cast<double>(freq[labels[i]]);

  std::vector<double> prob(n, 0.0);
  std::vector<bool> certain(n, false);
  std::size_t n_certain = 0;
  for (;;) {
    double free_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!certain[i]) free_mass += weight[i];
    }
    const double scale = static_cast<double>(n_keep - n_certain) / free_mass;
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (certain[i]) continue;
      prob[i] = scale * weight[i];
      if (prob[i] >= 1.0) {
        certain[i] = true;
        prob[i] = 1.0;
        ++n_certain;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  const double start = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

  std::vector<std::size_t> picked;
  picked.reserve(n_keep);
  std::vector<bool> taken(n, false);
  double cumulative = 0.0;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n_keep; ++k) {
    const double threshold = start + static_cast<double>(k);
    while (pos < n && cumulative + prob[all[pos]] <= threshold) {
      cumulative += prob[all[pos]];
      ++pos;
    }
    // Rounding can leave the last threshold past the end or on a taken item.
    std::size_t p = std::min(pos, n - 1);
    while (taken[all[p]]) p = (p + 1) % n;
    taken[all[p]] = true;
    picked.push_back(all[p]);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::pair<FeatureMatrix, LabelVector> balanced_subsample(const FeatureMatrix& features,
                                                         const LabelVector& labels,
                                                         std::size_t n_keep, std::uint64_t seed) {
  const auto idx = balanced_subsample_indices(labels, n_keep, seed);
  return {features.select_rows(idx), labels.select(idx)};
}

}  // namespace transtab
