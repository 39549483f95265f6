#pragma once

#include <cmath>
#include <cstdint>

namespace tsclust {

/// splitmix64 step; used to expand seeds into engine state and to derive
/// per-task seeds from a base seed.
inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic seed derivation for independent tasks (per-step chains,
/// gradient-descent restarts). mix_seed(seed, id) != seed for id > 0.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t task_id) {
    std::uint64_t x = seed ^ (0xD1B54A32D192ED03ULL * (task_id + 1));
    return splitmix64_next(x);
}

/// xoshiro256++ with hand-rolled distributions. The standard-library engines
/// are portable but the distributions are not; everything here is fully
/// specified so seeded runs are byte-identical across platforms.
///
/// Stream-splitting rule: stream s of seed q starts from splitmix64 state
/// q ^ (0x9E3779B97F4A7C15 * (s + 1)).
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
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

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0,n), unbiased via rejection. n >= 1.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x < threshold);
        return x % n;
    }

    /// Standard normal, Box-Muller. Consumes exactly two 64-bit draws;
    /// no caching, so the draw sequence is position-independent.
    double normal() {
        double u1 = 1.0 - uniform01();  // (0,1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

} // namespace tsclust
