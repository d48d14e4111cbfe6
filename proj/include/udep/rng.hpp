#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

// Deterministic, portable random source.
//
// Every stochastic component of the library draws from xoshiro256++
// (Blackman & Vigna 2019) seeded through SplitMix64 (Steele, Lea & Flood
// 2014), the seeding procedure recommended by the xoshiro authors. All
// distribution helpers are built from fixed arithmetic on the raw 64-bit
// stream, so identical seeds give bit-identical values on every platform.
//
// Stream splitting: sub-seeds are taken from the SplitMix64 output
// sequence of the parent seed via splitmix64_at(parent, i). The sweep
// harness documents which index each consumer uses.

namespace udep::rng {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9e3779b97f4a7c15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// i-th output (0-based) of the SplitMix64 sequence seeded with `seed`,
// computed in O(1).
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i) {
  return splitmix64_mix(seed + (i + 1) * kSplitMix64Gamma);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kSplitMix64Gamma;
    return splitmix64_mix(state_);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
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

  // Uniform double in [0, 1) with 53 random bits. One raw draw.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]. One raw draw.
  double uniform_pos() { return 1.0 - uniform01(); }

  // Equiprobable {-1.0, +1.0} from the top bit. One raw draw.
  double sign() { return (next() >> 63) ? 1.0 : -1.0; }

  // Unbiased integer in [0, n) by rejection on the modulus threshold.
  // Consumes a variable but seed-determined number of draws.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal pair via the basic Box-Muller transform. Two raw draws.
  std::pair<double, double> normal_pair() {
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace udep::rng
