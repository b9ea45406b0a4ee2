#pragma once

/**
 * @file rng.hpp
 * @brief Seeded deterministic PRNG for the verification suites.
 *
 * The stream is xorshift64* (Vigna's 64-bit shift-register generator with
 * a multiplicative output scramble); seeds are whitened with splitmix64.
 * Both are fixed, named algorithms so a (seed, stream) pair produces the
 * same draws in any implementation, on any platform.
 */

#include <cstdint>
#include <string>

namespace ultralab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class Rng {
    std::uint64_t state_;

public:
    /// Stream id separates independent substreams of one user seed, so
    /// per-trial results do not depend on scheduling order.
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        state_ = splitmix64(seed ^ splitmix64(stream));
        if (state_ == 0) state_ = 0x853C49E6748FEA9Bull;
    }

    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1Dull;
    }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    /// Uniform in [lo, hi] inclusive.
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
};

/// Stable stream id for a named suite/claim.
inline std::uint64_t stream_id(const std::string& name) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace ultralab
