#pragma once

#include "pat/grid.hpp"
#include "pat/rng.hpp"

namespace pat {

// Measurement-noise model: i.i.d. zero-mean Gaussian with std sigma =
// alpha * max|clean sinogram|.  sigma must be resolved before sampling.
struct NoiseSpec {
    double alpha = 0.0;
    double sigma = 0.0;
    uint64_t seed = 0;
};

double resolve_sigma(double alpha, const Sinogram& clean);

// Deterministic white Gaussian sinogram for the given seed.
Sinogram sample_measurement_noise(const NoiseSpec& spec, const GridSpec& g);

// Correlated polar-domain noise: white measurement noise pushed through the
// filtered-backprojection inverse and the polar map, P(V(xi)).
PolarImage sample_polar_noise(const NoiseSpec& spec, const GridSpec& g);

// Seed for a (sample, draw) slot of a base seed; order-independent.
inline uint64_t derive_seed(uint64_t base, uint64_t sample, uint64_t draw = 0) {
    return CounterRng::mix(CounterRng::mix(base ^ (sample * 0x9e3779b97f4a7c15ULL)) ^
                           (draw + 0x7f4a7c15ULL));
}

} // namespace pat
