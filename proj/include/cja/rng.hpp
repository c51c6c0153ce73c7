#pragma once

#include <cstdint>
#include <random>

namespace cja {

// splitmix64 finalizer. Used for seed derivation so that independent
// generators can be created from (seed, salt...) tuples.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return h;
}

// Deterministic RNG. The engine is std::mt19937_64, whose output sequence is
// pinned by the standard; sampling helpers below avoid std::*_distribution,
// whose algorithms vary between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t bounded(std::uint64_t n) {
        // Rejection sampling on the top bits; unbiased.
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1) with 53-bit resolution.
    double real01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform score in [0, 10] at 0.1 granularity, as CVSS scores are quoted.
    double cvss_score() { return static_cast<double>(bounded(101)) / 10.0; }

    bool chance(double p) { return real01() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace cja
