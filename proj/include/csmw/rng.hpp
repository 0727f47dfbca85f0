#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

// Deterministic seeded randomness for masks and sensing matrices. The
// generator is splitmix64 (a fixed 64-bit counter-based mixer), so identical
// seeds give identical draws independent of platform or standard library.

namespace csmw {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in (0, 1]
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller (cosine branch; two draws per value)
  double next_gauss() {
    double u1 = next_unit_open();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

// First m entries of a seeded uniform draw of {0,...,n-1} without
// replacement (partial Fisher-Yates), returned sorted ascending.
inline std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t m,
                                                            SplitMix64& rng) {
  std::vector<std::int64_t> perm(n);
  for (std::int64_t i = 0; i < n; ++i) perm[i] = i;
  for (std::int64_t i = 0; i < m; ++i) {
    std::int64_t j = i + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::int64_t> out(perm.begin(), perm.begin() + m);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace csmw
