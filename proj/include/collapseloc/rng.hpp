#pragma once

#include <cmath>
#include <cstdint>

namespace collapseloc {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the draws for (seed, index) never depend on any
/// other index, so trials can run in any order or on any thread.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t index)
      : state_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool coin() { return (next() >> 63) != 0; }
  int sign() { return coin() ? 1 : -1; }
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

 private:
  std::uint64_t state_;
};

} // namespace collapseloc
