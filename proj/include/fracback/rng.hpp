#pragma once

#include <cstdint>

namespace fracback {

/// xoshiro256** (Blackman & Vigna), state seeded from a 64-bit value via
/// SplitMix64. Defined bit-for-bit here so noise draws are identical on
/// every platform, unlike std::normal_distribution.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform();

private:
    std::uint64_t s_[4];
};

/// Standard normal variates by the Box-Muller transform; both variates of
/// each pair are used, the cosine branch first.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next();

private:
    Xoshiro256 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fracback
