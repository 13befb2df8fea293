#pragma once

#include <cstdint>
#include <random>

namespace plgc {

// Seeded RNG with hand-rolled uniform mapping. std::uniform_real_distribution
// is implementation-defined, so bit-reproducible runs across toolchains need
// the mapping fixed here.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, 2pi).
    double uniform_angle() { return uniform_unit() * 6.28318530717958647692; }

    // +1 or -1 with equal probability.
    double rademacher() { return (engine_() & 1) ? 1.0 : -1.0; }

  private:
    std::mt19937_64 engine_;
};

// One splitmix64 step: a cheap bijective mixer for deriving independent seeds
// from a base seed and indices.
inline uint64_t mix_seed(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace plgc
