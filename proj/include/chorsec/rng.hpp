// Deterministic pseudorandomness used across the interpreter and the test
// harness: a splitmix64 stream, its finalizer as a standalone mixer, and
// FNV-1a for hashing canonical encodings. All outputs are reproducible
// bit-for-bit from the seed.
#pragma once

#include <cstdint>
#include <string_view>

namespace chorsec {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t z = x + kSplitMix64Gamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kSplitMix64Gamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform-ish draw in [0, n); n must be nonzero.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// The i-th output of a splitmix64 stream seeded with `seed`, without
// advancing through the first i values.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i) {
  return mix64(seed + i * kSplitMix64Gamma);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace chorsec
