#pragma once

#include <cmath>
#include <cstdint>

namespace sgrf {

// splitmix64: seeds the main generator and derives per-sample substream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman/Vigna). One instance per sample substream keeps draws
// independent of how samples are partitioned across workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    // Substream for sample `index` of run `seed`: disjoint streams for
    // distinct indices, reproducible regardless of evaluation order.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(seed ^ ((index + 1) * 0xD1B54A32D192ED03ULL));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1): 53-bit mantissa.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (cosine branch). u1 is guarded away from
    // zero so the log never overflows.
    double normal() {
        double u1 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

// Stateless key derivation for nested deterministic streams (e.g. one solver
// seed per multiroot round).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed ^ ((index + 1) * 0x9E3779B97F4A7C15ULL);
    return splitmix64(sm);
}

} // namespace sgrf
