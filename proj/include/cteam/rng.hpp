#pragma once

#include <cstdint>

namespace cteam {

// Counter-based generator: stream i of seed s is independent of how many
// values were drawn from other streams, so parallel consumers reproduce the
// serial result.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

  CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream); }

  std::uint64_t next() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % n;
  }

  bool coin(std::uint64_t num = 1, std::uint64_t den = 2) { return below(den) < num; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cteam
