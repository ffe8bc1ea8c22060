#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace simplygen {

// Reproducible stream: the same (seed, stream) pair always yields the same draws.
// xoshiro256** state, filled from a seed_seq over (seed, stream).
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x5eedu};
    std::array<std::uint32_t, 8> words;
    seq.generate(words.begin(), words.end());
    for (int i = 0; i < 4; ++i) s_[i] = (std::uint64_t{words[2 * i]} << 32) | words[2 * i + 1];
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }
  std::uint64_t operator()() { return bits(); }

  std::uint64_t bits() {
    const std::uint64_t r = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return r;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n) {
    __uint128_t p = static_cast<__uint128_t>(bits()) * n;
    auto low = static_cast<std::uint64_t>(p);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        p = static_cast<__uint128_t>(bits()) * n;
        low = static_cast<std::uint64_t>(p);
      }
    }
    return static_cast<std::uint64_t>(p >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_, stream_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace simplygen
