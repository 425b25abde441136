#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace specclass {

// SplitMix64 state update + output mix (Steele, Lea, Flood 2014). Used for
// seeding and for O(1) stream-seed derivation.
namespace detail {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256++ (Blackman & Vigna 2019): fixed, portable 64-bit generator.
// All sampling in this project goes through this generator so that seeded
// runs reproduce bit-identically across platforms and standard libraries.
// State is seeded from a 64-bit seed via four SplitMix64 steps, as the
// xoshiro authors recommend.
class Xoshiro256pp {
public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += detail::kSplitMix64Gamma;
      word = detail::splitmix64_mix(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
  std::array<std::uint64_t, 4> state_;
};

// Stream splitting: stream i of a master seed is seeded with the (i+1)-th
// output of SplitMix64 initialised at the master seed. Streams derived this
// way are independent for all practical purposes and computable in O(1).
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  return detail::splitmix64_mix(master_seed + (stream_index + 1) * detail::kSplitMix64Gamma);
}

// FNV-1a, used to key sampling streams by material label so that evaluation
// results are invariant under reordering of the class list.
inline std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Mixes three indices into one well-spread 64-bit value.
inline std::uint64_t mix_indices(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = detail::splitmix64_mix(a + detail::kSplitMix64Gamma);
  h = detail::splitmix64_mix(h ^ (b + 0x94D049BB133111EBull));
  h = detail::splitmix64_mix(h ^ (c + 0xBF58476D1CE4E5B9ull));
  return h;
}

}  // namespace specclass
