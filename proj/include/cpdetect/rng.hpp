#pragma once

#include <cstdint>
#include <random>

namespace cpdetect {

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for the substream identified by (seed, a, b), e.g. (run seed,
/// generation, chromosome index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Seeded random source with platform-independent derived draws.
///
/// Bits come from std::mt19937_64 (bit-exact by the standard). Uniforms take
/// the top 53 bits, offset by half an ulp so they lie in the open interval
/// (0, 1). Normals use the basic Box-Muller transform: each pair of uniforms
/// (u1, u2) yields sqrt(-2 ln u1) cos(2 pi u2) followed by
/// sqrt(-2 ln u1) sin(2 pi u2).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on (0, 1).
    double uniform();

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller.
    double normal();

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cpdetect
