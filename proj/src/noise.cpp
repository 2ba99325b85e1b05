#include "pat/noise.hpp"

#include "pat/fbp.hpp"
#include "pat/polar.hpp"

#include <cmath>
#include <stdexcept>

namespace pat {

double resolve_sigma(double alpha, const Sinogram& clean) {
    if (alpha < 0) throw std::invalid_argument("resolve_sigma: alpha must be >= 0");
    double peak = 0.0;
    for (double x : clean.v) peak = std::max(peak, std::abs(x));
    return alpha * peak;
}

Sinogram sample_measurement_noise(const NoiseSpec& spec, const GridSpec& g) {
    if (!(spec.sigma >= 0) || !std::isfinite(spec.sigma))
        throw std::invalid_argument("sample_measurement_noise: sigma not resolved");
    Sinogram out(g.n_det, g.n_t);
    if (spec.sigma == 0.0) return out;
    const CounterRng rng(spec.seed, static_cast<uint64_t>(SeedStream::MeasurementNoise));
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = spec.sigma * rng.normal(i);
    return out;
}

PolarImage sample_polar_noise(const NoiseSpec& spec, const GridSpec& g) {
    if (spec.sigma == 0.0) return PolarImage(g.n_phi, g.n_r);
    const Sinogram xi = sample_measurement_noise(spec, g);
    return to_polar(fbp_inverse(xi, g), g);
}

} // namespace pat
