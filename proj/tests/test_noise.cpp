#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pat/fbp.hpp"
#include "pat/noise.hpp"
#include "pat/polar.hpp"

#include <cmath>

using namespace pat;

TEST_CASE("sigma resolves from the clean sinogram peak") {
    Sinogram s(4, 4);
    s.at(2, 1) = -3.0;
    s.at(0, 0) = 2.0;
    CHECK(resolve_sigma(0.05, s) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK_THROWS_AS(resolve_sigma(-0.1, s), std::invalid_argument);
}

TEST_CASE("sigma zero gives exactly zero noise") {
    const GridSpec g = make_grid(16);
    const Sinogram s = sample_measurement_noise({0.05, 0.0, 123}, g);
    for (double v : s.v) CHECK(v == 0.0);
    const PolarImage p = sample_polar_noise({0.05, 0.0, 123}, g);
    for (double v : p.v) CHECK(v == 0.0);
}

TEST_CASE("gaussian moments over 1e6 samples") {
    GridSpec g = make_grid(16);
    g.n_det = 1000;
    g.n_t = 1000;
    const Sinogram s = sample_measurement_noise({1.0, 1.0, 2024}, g);
    double mean = 0;
    for (double v : s.v) mean += v;
    mean /= static_cast<double>(s.v.size());
    double var = 0;
    for (double v : s.v) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (static_cast<double>(s.v.size()) - 1));
    CHECK(std::abs(mean) <= 0.005);
    CHECK(sd >= 0.998);
    CHECK(sd <= 1.002);
}

TEST_CASE("same seed reproduces the draw, different seeds differ") {
    const GridSpec g = make_grid(16);
    const NoiseSpec spec{0.05, 0.7, 99};
    const Sinogram a = sample_measurement_noise(spec, g);
    const Sinogram b = sample_measurement_noise(spec, g);
    CHECK(a.v == b.v);
    const Sinogram c = sample_measurement_noise({0.05, 0.7, 100}, g);
    CHECK(a.v != c.v);
}

TEST_CASE("unresolved sigma is rejected") {
    const GridSpec g = make_grid(16);
    CHECK_THROWS_AS(sample_measurement_noise({0.05, std::nan(""), 1}, g), std::invalid_argument);
}

TEST_CASE("independent draws are uncorrelated, neighbors are correlated") {
    const GridSpec g = make_grid(16);
    const int draws = 100;
    double cross = 0, cross_aa = 0, cross_bb = 0; // pooled over pixels and draws
    double lag = 0, lag_den = 0;                  // radial-neighbor autocovariance
    for (int d = 0; d < draws; ++d) {
        const PolarImage a = sample_polar_noise({0.1, 1.0, derive_seed(77, d, 0)}, g);
        const PolarImage b = sample_polar_noise({0.1, 1.0, derive_seed(77, d, 1)}, g);
        for (size_t i = 0; i < a.v.size(); ++i) {
            cross += a.v[i] * b.v[i];
            cross_aa += a.v[i] * a.v[i];
            cross_bb += b.v[i] * b.v[i];
        }
        for (int j = 0; j < a.n_phi; ++j)
            for (int i = 0; i + 1 < a.n_r; ++i) {
                lag += a.at(j, i) * a.at(j, i + 1);
                lag_den += a.at(j, i) * a.at(j, i);
            }
    }
    const double rho_indep = cross / std::sqrt(cross_aa * cross_bb);
    CHECK(std::abs(rho_indep) <= 0.1);
    // measured radial-lag autocorrelation of P(V(xi)) at M=16 is ~0.9;
    // pinned far above the white-noise null
    const double rho_lag = lag / lag_den;
    CHECK(rho_lag > 0.5);
}

TEST_CASE("push-forward is linear") {
    const GridSpec g = make_grid(16);
    const Sinogram x1 = sample_measurement_noise({0.1, 1.0, 5}, g);
    const Sinogram x2 = sample_measurement_noise({0.1, 1.0, 6}, g);
    Sinogram sum(g.n_det, g.n_t);
    for (size_t i = 0; i < sum.v.size(); ++i) sum.v[i] = x1.v[i] + x2.v[i];
    const PolarImage p1 = to_polar(fbp_inverse(x1, g), g);
    const PolarImage p2 = to_polar(fbp_inverse(x2, g), g);
    const PolarImage ps = to_polar(fbp_inverse(sum, g), g);
    double peak = 0;
    for (double v : ps.v) peak = std::max(peak, std::abs(v));
    for (size_t i = 0; i < ps.v.size(); ++i)
        CHECK(std::abs(ps.v[i] - (p1.v[i] + p2.v[i])) <= 1e-10 * std::max(peak, 1.0));
}

TEST_CASE("sign-flipped noise has identical even moments") {
    const GridSpec g = make_grid(16);
    const PolarImage p = sample_polar_noise({0.1, 1.0, 314}, g);
    double mean = 0, m2 = 0, m4 = 0;
    double mean_f = 0, m2_f = 0, m4_f = 0;
    for (double v : p.v) {
        mean += v;
        m2 += v * v;
        m4 += v * v * v * v;
        const double w = -v;
        mean_f += w;
        m2_f += w * w;
        m4_f += w * w * w * w;
    }
    CHECK(mean == doctest::Approx(-mean_f).epsilon(1e-15));
    CHECK(m2 == m2_f);
    CHECK(m4 == m4_f);
}
