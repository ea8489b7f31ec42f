#pragma once

#include <cstdint>
#include <random>

namespace pruw {

// Seeded random stream. mt19937_64 output is fully specified by the standard
// and the rejection sampler below avoids std::uniform_int_distribution, whose
// mapping is implementation-defined, so identical seeds give identical
// protocol transcripts on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform draw from [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    // Derives an independent stream for a named purpose; keeps noise draws for
    // constants / storage / per-session user noise decoupled from each other.
    Rng fork(std::uint64_t purpose) {
        std::seed_seq seq{engine_(), purpose, std::uint64_t(0x9e3779b97f4a7c15ULL)};
        std::mt19937_64 forked(seq);
        return Rng(forked());
    }

private:
    std::mt19937_64 engine_;
};

} // namespace pruw
