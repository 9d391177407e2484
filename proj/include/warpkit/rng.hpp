#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace warpkit {

/// Seeded 64-bit generator with draw rules spelled out here rather than left
/// to the standard library's distribution objects, so replays are portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n) by rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Permutation of 0..n-1 by a forward Fisher-Yates shuffle.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto j = i + static_cast<std::size_t>(below(n - i));
      std::swap(p[i], p[j]);
    }
    return p;
  }

  /// The first `count` entries of a fresh permutation of 0..n-1.
  std::vector<std::size_t> sample(std::size_t n, std::size_t count) {
    auto p = permutation(n);
    p.resize(count);
    return p;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace warpkit
