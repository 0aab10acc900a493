#pragma once

#include <cmath>
#include <cstdint>

namespace redtide {

/// Self-contained xorshift64* generator. Platform-independent and stable
/// across toolchains, unlike the std distributions, so seeded fixtures
/// reproduce bit-for-bit. The update is Marsaglia's xorshift (12/25/27)
/// followed by the 0x2545F4914F6CDD1D multiplier; the seed is pre-mixed
/// with one round of splitmix64 to keep the state nonzero.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        state_ = z ^ (z >> 31);
        if (state_ == 0) state_ = 0x1ULL;
    }

    uint64_t next_u64() {
        uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller (trig form, no rejection, so the
    /// uniform stream consumption is fixed at two draws per call).
    double next_normal() {
        double u1 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

  private:
    uint64_t state_;
};

}  // namespace redtide
