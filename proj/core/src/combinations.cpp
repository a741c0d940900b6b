#include "transtab/combinations.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace transtab {
namespace {
__extension__ using Wide = unsigned __int128;
}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > UINT64_MAX) throw std::overflow_error("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

bool next_combination(std::span<std::size_t> combo, std::size_t n) {
  const std::size_t k = combo.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::vector<std::size_t>> enumerate_pools(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("pool size " + std::to_string(k) + " is not in [1, " +
                                std::to_string(n) + "]");
  }
  std::vector<std::vector<std::size_t>> pools;
  pools.reserve(binomial(n, k));
  std::vector<std::size_t> combo(k);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  do {
    pools.push_back(combo);
  } while (next_combination(combo, n));
  return pools;
}

}  // namespace transtab
