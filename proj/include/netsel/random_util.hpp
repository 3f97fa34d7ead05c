#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace netsel {

using Rng = std::mt19937_64;

/// splitmix64 mix of (base, index); used to hand every parallel realization
/// an independent, reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// k distinct indices from [0, n), sorted ascending (partial Fisher-Yates).
inline std::vector<int> random_subset(int n, int k, Rng& rng) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

} // namespace netsel
