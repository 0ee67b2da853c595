#pragma once

#include <cstdint>

namespace qcap {

// Avalanche finalizer used by SplitMix64.  Exposed so that stateless,
// counter-based draws (mix_at) produce exactly the sequence a stepped
// generator would.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64: tiny, fast, full-period generator.  Chosen over the standard
// engines because its output is fixed by the algorithm, not by the standard
// library, which keeps seeded runs byte-identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return mix64(state_ += kGolden); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), rejection-sampled so it is exactly
  // unbiased for any bound.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

// i-th output of SplitMix64(seed) without stepping a generator.  Lets
// independent slots draw independent values from a shared seed in any order
// (and from any thread) while agreeing with a sequential walk.
inline std::uint64_t mix_at(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGolden);
}

// Decorrelated child seed for a named stream (basis choice, state bits,
// channel noise, ...) derived from one master seed.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t stream) {
  return mix64(mix64(master + (stream + 1) * kGolden) ^ kGolden);
}

}  // namespace qcap
