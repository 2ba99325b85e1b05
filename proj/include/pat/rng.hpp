#pragma once

#include <cmath>
#include <cstdint>

namespace pat {

// Counter-based generator: every value is a pure function of (seed, stream,
// counter), so draws are reproducible and order-independent.  Mixing is
// splitmix64 applied to the combined key.
struct CounterRng {
    uint64_t key;

    explicit CounterRng(uint64_t seed, uint64_t stream = 0)
        : key(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0xbf58476d1ce4e5b9ULL))) {}

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t bits(uint64_t counter) const { return mix(key ^ mix(counter)); }

    // uniform in (0,1]
    double uniform(uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * (static_cast<double>(bits(counter) >> 11) * 0x1.0p-53);
    }

    // standard normal via Box-Muller; one normal per counter
    double normal(uint64_t counter) const {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // integer in [0, n)
    uint64_t below(uint64_t counter, uint64_t n) const { return bits(counter) % n; }
};

// Named seed streams keep dataset, initialization, and noise draws disjoint.
enum class SeedStream : uint64_t {
    Dataset = 1,
    MeasurementNoise = 2,
    ExtraNoise = 3, // the additional training-time noise
    Init = 4,
    Batch = 5,
    DipInput = 6,
    EmdReference = 7,
};

inline CounterRng stream_rng(uint64_t seed, SeedStream s, uint64_t index = 0) {
    return CounterRng(seed, static_cast<uint64_t>(s) * 0x100000001ULL + index);
}

} // namespace pat
