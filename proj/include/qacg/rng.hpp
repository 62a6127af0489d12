#pragma once

// Seeded randomness with a fully specified, platform-independent procedure.
//
// Generator: SplitMix64. state advances by 0x9E3779B97F4A7C15 and each output
// is the standard SplitMix64 finalizer applied to the new state.
//
// Bounded draws (uniform(n)): draw x, reject while x < (2^64 - n) mod n, and
// return x mod n. The standard library distributions are avoided because
// their output is implementation-defined.
//
// Sampling m of n items without replacement: partial Fisher-Yates over the
// items in their given order. For i = 0..m-1, j = i + uniform(n - i), swap
// items i and j; the first m items are the sample.
//
// Derived seeds: derive_seed(seed, tag) = mix64(seed ^ fnv1a64(tag)).

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace qacg {

constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return mix64(seed ^ fnv1a64(tag));
}

class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform integer in [0, n). n must be positive.
  constexpr std::uint64_t uniform(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x = next();
    while (x < threshold) x = next();
    return x % n;
  }

  /// Partial Fisher-Yates; returns the first `m` items after shuffling.
  template <typename T>
  std::vector<T> sample(std::vector<T> items, std::size_t m) {
    if (m > items.size()) m = items.size();
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform(items.size() - i));
      std::swap(items[i], items[j]);
    }
    items.resize(m);
    return items;
  }

 private:
  std::uint64_t state_;
};

}  // namespace qacg
