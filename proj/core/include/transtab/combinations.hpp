#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace transtab {

// C(n, k); throws std::overflow_error past 2^64.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Advances a sorted k-subset of {0..n-1} to its lexicographic successor.
// Returns false (leaving `combo` unspecified) after the last subset.
bool next_combination(std::span<std::size_t> combo, std::size_t n);

// All C(n, k) subsets of {0..n-1} in lexicographic order. Throws
// std::invalid_argument unless 1 <= k <= n.
std::vector<std::vector<std::size_t>> enumerate_pools(std::size_t n, std::size_t k);

}  // namespace transtab
