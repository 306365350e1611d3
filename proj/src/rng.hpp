#pragma once

#include <cstdint>

namespace hardmdp {

// SplitMix64 (Steele/Lea/Flood constants). Small, fast, and trivially
// splittable into independent substreams, which is what keeps every sampled
// quantity reproducible from one master seed regardless of evaluation order:
// substream i of master m is seeded with mix(m ^ mix(i)), so rollout #n,
// generator attempt #n and bench cell #n each own a disjoint stream.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static uint64_t mix(uint64_t x) {
    SplitMix64 g(x);
    return g.next();
  }

  static SplitMix64 substream(uint64_t master, uint64_t index) {
    return SplitMix64(mix(master ^ mix(index)));
  }

  // Uniform in [0, n) by rejection (n > 0); unbiased.
  uint64_t below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    while (true) {
      uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  // 53 uniform bits, the resolution used for Bernoulli draws.
  uint64_t bits53() { return next() >> 11; }

  bool coin() { return next() >> 63; }

 private:
  uint64_t state_;
};

}  // namespace hardmdp
