#pragma once

// Seeded randomness helpers. mt19937_64 supplies the raw stream; bounded
// draws are done by modulo rejection here because std::uniform_int_distribution
// is implementation-defined and would break cross-platform reproducibility.

#include <cstdint>
#include <random>
#include <vector>

namespace edd {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives independent sub-seeds (per sweep point, repetition, algorithm...).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  return splitmix64(base ^ splitmix64(salt));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }

  // Uniform in [lo, hi], inclusive.
  long long between(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace edd
