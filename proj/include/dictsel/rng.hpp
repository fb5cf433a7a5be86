#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace dictsel {

// splitmix64 step, used to derive independent trial seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic random source. Engine is std::mt19937_64 (bit-portable across
// implementations); every distribution below is hand-rolled so a stream can be
// reproduced from the documented mappings alone:
//   u64        : raw engine output
//   uniform01  : (u64 >> 11) * 2^-53, in [0, 1)
//   normal     : Box-Muller cosine branch, consumes exactly two u64 per call
//   below(n)   : modulo rejection, consumes u64 until one falls in range
//   sign       : +1 if the top bit of one u64 is 0, else -1
//   subset     : partial Fisher-Yates over 0..n-1, result sorted ascending
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    // 1-u keeps the log argument in (0, 1]; the sine branch is discarded so
    // each call always costs two draws and never caches state
    const double u = uniform01();
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u));
    return r * std::cos(2.0 * std::numbers::pi * v);
  }

  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    const std::uint64_t limit = UINT64_MAX - rem;        // inclusive
    std::uint64_t x = u64();
    while (x > limit) x = u64();
    return x % n;
  }

  double sign() { return (u64() >> 63) ? -1.0 : 1.0; }

  // uniform c-subset of {0, ..., n-1}, ascending
  std::vector<int> subset(int n, int c) {
    if (c < 0 || n < 0 || c > n)
      throw std::invalid_argument("Rng::subset: need 0 <= c <= n");
    std::vector<int> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < c; ++i) {
      const auto j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
    }
    a.resize(static_cast<std::size_t>(c));
    std::sort(a.begin(), a.end());
    return a;
  }

  // uniform c-subset of the given pool (pool entries unique), ascending
  std::vector<int> subset_of(const std::vector<int>& pool, int c) {
    const auto pick = subset(static_cast<int>(pool.size()), c);
    std::vector<int> out(pick.size());
    for (std::size_t i = 0; i < pick.size(); ++i)
      out[i] = pool[static_cast<std::size_t>(pick[i])];
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dictsel
