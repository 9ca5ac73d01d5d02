#pragma once

#include <cstdint>

namespace pf {

// SplitMix64. Small, fast, and stateless enough to derive independent
// substreams from (seed, index), which keeps parallel and serial runs
// bit-for-bit identical.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

// Independent generator for the index-th item of a seeded run.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  return SplitMix64(mixer.next());
}

}  // namespace pf
