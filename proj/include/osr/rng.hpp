#pragma once

#include <cstdint>
#include <optional>

namespace osr {

/// SplitMix64 generator. The whole stream is a function of the seed:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform():      (next() >> 11) * 2^-53, in [0, 1)
/// uniform_below(n): rejection sampling, draws r until r >= (2^64 - n) mod n,
///                 returns r mod n
/// gaussian():     Box-Muller on u1 = 1 - uniform(), u2 = uniform();
///                 returns sqrt(-2 ln u1) cos(2 pi u2), then the paired
///                 sqrt(-2 ln u1) sin(2 pi u2) on the following call.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t uniform_below(std::uint64_t n) noexcept;

  double gaussian() noexcept;

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

}  // namespace osr
