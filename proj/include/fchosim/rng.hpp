// rng.hpp - Seeded deterministic random streams.
//
// Every stochastic draw in the simulator comes from a stream derived by
// hashing (seed, label...) so results depend only on the scenario seed and
// the entity ids, never on thread scheduling or call order across entities.

#pragma once

#include <cmath>
#include <cstdint>

namespace fchosim {

// SplitMix64 mixing function (Steele et al.), also used as the stream PRNG.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

class RngStream {
public:
    explicit RngStream(std::uint64_t state = 1) : state_(state) {}

    // Derive an independent stream keyed by one or more labels.
    template <typename... Keys>
    static RngStream keyed(std::uint64_t seed, Keys... keys) {
        std::uint64_t s = mix64(seed);
        ((s = hash_combine(s, static_cast<std::uint64_t>(keys))), ...);
        return RngStream(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + next_double() * (b - a); }

    // Box-Muller, one value per call (no cached spare, keeps draw count explicit).
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(6.283185307179586 * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

}  // namespace fchosim
