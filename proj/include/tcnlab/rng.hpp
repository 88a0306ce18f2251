// Deterministic random source used everywhere in the library.
//
// All randomness flows through splitmix64, a counter-based 64-bit mixer:
// the k-th output of a stream is a pure function of (seed, k), so any
// sequence can be reproduced from its seed alone, independent of call
// order elsewhere in the program. Normal variates come from Box-Muller
// applied to two consecutive uniforms. No std::random distribution is
// used because their output is implementation-defined.
#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>

namespace tcnlab {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Collapses an ordered tuple of parts (root seed, cell coordinates, ...)
// into one seed. Adding parts never perturbs streams derived from other
// part tuples.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t state = 0x8000000000000001ull;
    for (std::uint64_t p : parts) {
        state ^= p + 0x9E3779B97F4A7C15ull + (state << 6) + (state >> 2);
        (void)splitmix64_next(state);
    }
    return splitmix64_next(state);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform in (0, 1]; never returns 0 so it is safe under log().
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t state_;
};

// Standard normal sampler; Box-Muller with the spare value cached.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_uniform();
        const double u2 = rng_.next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace tcnlab
