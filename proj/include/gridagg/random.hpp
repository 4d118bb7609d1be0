// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_RANDOM_HPP_
#define GRIDAGG_RANDOM_HPP_

#include <cstdint>
#include <vector>

namespace gridagg {

/// SplitMix64 generator. Used instead of <random> engines plus distributions
/// because the standard distributions are implementation-defined; this keeps
/// seeded runs reproducible across compilers and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0. Rejection-free modulo is fine
  /// at the bounds used here (bias < 2^-32 for bound < 2^32).
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by SplitMix64.
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace gridagg

#endif  // GRIDAGG_RANDOM_HPP_
