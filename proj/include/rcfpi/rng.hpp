#pragma once

#include <cstdint>

namespace rcfpi {

/// Counter-seeded xoshiro256++ stream. Streams indexed by (seed, stream_id)
/// are statistically independent and reproducible across platforms, so each
/// Monte-Carlo trajectory can own its stream regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    for (auto& word : state_) word = splitmix64(x);
    // xoshiro must not start from the all-zero state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace rcfpi
