#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pat/angconv.hpp"
#include "pat/rng.hpp"

#include <cmath>
#include <complex>
#include <filesystem>

using namespace pat;

namespace {

PolarImage random_polar(int n_phi, int n_r, uint64_t seed) {
    const CounterRng rng(seed, 5);
    PolarImage p(n_phi, n_r);
    for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = rng.uniform(i, -1.0, 1.0);
    return p;
}

// brute-force circular convolution straight from the definition
PolarImage direct_convolve(const PolarImage& p, const AngularKernel& w) {
    PolarImage out(p.n_phi, p.n_r);
    const int c = w.center();
    for (int j = 0; j < p.n_phi; ++j)
        for (int i = 0; i < p.n_r; ++i) {
            double acc = 0;
            for (int k = 0; k < w.taps(); ++k)
                acc += w.w[k] * p.at(((j - k + c) % p.n_phi + p.n_phi) % p.n_phi, i);
            out.at(j, i) = acc;
        }
    return out;
}

// spectral oracle: DFT-multiply-inverse per radial ring
PolarImage fft_convolve(const PolarImage& p, const AngularKernel& w) {
    const int N = p.n_phi, c = w.center();
    std::vector<std::complex<double>> wf(N, 0.0);
    for (int k = 0; k < w.taps(); ++k) {
        // kernel tap k sits at angular offset k - c
        const int pos = ((k - c) % N + N) % N;
        wf[pos] += w.w[k];
    }
    auto dft = [N](const std::vector<std::complex<double>>& in, int sign) {
        std::vector<std::complex<double>> out(N);
        for (int k = 0; k < N; ++k) {
            std::complex<double> acc = 0;
            for (int n = 0; n < N; ++n)
                acc += in[n] * std::polar(1.0, sign * 2.0 * M_PI * k * n / N);
            out[k] = acc;
        }
        return out;
    };
    const auto WF = dft(wf, -1);
    PolarImage out(p.n_phi, p.n_r);
    for (int i = 0; i < p.n_r; ++i) {
        std::vector<std::complex<double>> ring(N);
        for (int j = 0; j < N; ++j) ring[j] = p.at(j, i);
        auto RF = dft(ring, -1);
        for (int k = 0; k < N; ++k) RF[k] *= WF[k];
        const auto back = dft(RF, +1);
        for (int j = 0; j < N; ++j) out.at(j, i) = back[j].real() / N;
    }
    return out;
}

} // namespace

TEST_CASE("indicator-10 at n_phi=804 has 23 uniform taps in a 63-tap window") {
    const AngularKernel k = make_kernel(KernelName::Indicator10, 804);
    REQUIRE(k.taps() == 63);
    const int c = k.center();
    int nonzero = 0;
    double sum = 0;
    for (int i = 0; i < 63; ++i) {
        sum += k.w[i];
        if (k.w[i] != 0.0) {
            ++nonzero;
            CHECK(k.w[i] == doctest::Approx(1.0 / 23).epsilon(1e-12));
            CHECK(std::abs(i - c) <= 11);
        }
    }
    CHECK(nonzero == 23);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("indicator-20 at n_phi=201 has half-width 5") {
    const AngularKernel k = make_kernel("indicator-20", 201);
    int nonzero = 0;
    for (double x : k.w)
        if (x != 0) ++nonzero;
    CHECK(nonzero == 11);
}

TEST_CASE("delta kernel is [1]") {
    const AngularKernel k = make_kernel(KernelName::Delta, 50);
    REQUIRE(k.taps() == 1);
    CHECK(k.w[0] == 1.0);
    CHECK(k.is_delta());
}

TEST_CASE("gaussian-1 center tap matches direct summation") {
    const AngularKernel k = make_kernel(KernelName::Gaussian1, 804);
    double norm = 0;
    for (int dl = -31; dl <= 31; ++dl) norm += std::exp(-0.5 * dl * dl);
    CHECK(norm == doctest::Approx(2.5066).epsilon(1e-4));
    CHECK(k.w[k.center()] == doctest::Approx(1.0 / norm).epsilon(1e-12));
    // symmetry of all named kernels
    for (int i = 0; i < k.taps(); ++i) CHECK(k.w[i] == k.w[k.taps() - 1 - i]);
}

TEST_CASE("kernel construction errors") {
    CHECK_THROWS_AS(make_kernel("gaussian-7", 201), std::invalid_argument);
    CHECK_THROWS_AS(make_kernel(KernelName::Indicator10, 62), std::invalid_argument);
    CHECK_THROWS_AS(make_custom_kernel({0.5, 0.5}, 201), std::invalid_argument); // even length
    CHECK_THROWS_AS(make_custom_kernel({0.5, -0.1, 0.5}, 201), std::invalid_argument);
}

TEST_CASE("delta convolution is a bit-exact identity") {
    const PolarImage p = random_polar(67, 9, 1);
    const AngularKernel d = make_kernel(KernelName::Delta, 67);
    const PolarImage out = angular_convolve(p, d);
    CHECK(out.v == p.v);
    CHECK(angular_convolve_adjoint(p, d).v == p.v);
}

TEST_CASE("normalized kernels preserve constants") {
    PolarImage p(201, 8);
    for (auto& v : p.v) v = 3.25;
    for (const char* name : {"indicator-10", "indicator-20", "gaussian-1", "gaussian-2"}) {
        const PolarImage out = angular_convolve(p, make_kernel(name, 201));
        for (double v : out.v) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
    }
}

TEST_CASE("one-hot input reproduces the kernel on its ring") {
    const int n_phi = 201;
    const AngularKernel k = make_kernel("indicator-20", n_phi);
    PolarImage p(n_phi, 8);
    p.at(0, 5) = 1.0;
    const PolarImage out = angular_convolve(p, k);
    const PolarImage oracle = direct_convolve(p, k);
    for (size_t i = 0; i < out.v.size(); ++i) CHECK(out.v[i] == doctest::Approx(oracle.v[i]));
    // ring 5 holds the kernel centered at j=0; all other rings stay zero
    const int c = k.center();
    for (int j = 0; j < n_phi; ++j) {
        const int tap = (j + c) % n_phi; // out[j] = w[(j + c) mod n_phi]
        const double expect = tap < k.taps() ? k.w[tap] : 0.0;
        CHECK(out.at(j, 5) == doctest::Approx(expect).epsilon(1e-12));
        for (int i = 0; i < 8; ++i)
            if (i != 5) CHECK(out.at(j, i) == 0.0);
    }
}

TEST_CASE("adjoint equals forward for symmetric kernels") {
    const PolarImage p = random_polar(201, 6, 2);
    for (const char* name : {"indicator-10", "gaussian-2"}) {
        const AngularKernel k = make_kernel(name, 201);
        const PolarImage a = angular_convolve(p, k);
        const PolarImage b = angular_convolve_adjoint(p, k);
        for (size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == doctest::Approx(b.v[i]));
    }
}

TEST_CASE("adjoint dot-product identity holds to 1e-12") {
    // asymmetric custom kernel exercises the index reversal
    const AngularKernel k = make_custom_kernel({0.6, 0.25, 0.1, 0.05, 0.0}, 97);
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const PolarImage p = random_polar(97, 7, 2 * seed);
        const PolarImage q = random_polar(97, 7, 2 * seed + 1);
        const PolarImage Ap = angular_convolve(p, k);
        const PolarImage Atq = angular_convolve_adjoint(q, k);
        double lhs = 0, rhs = 0, np = 0, nq = 0;
        for (size_t i = 0; i < p.v.size(); ++i) {
            lhs += Ap.v[i] * q.v[i];
            rhs += p.v[i] * Atq.v[i];
            np += p.v[i] * p.v[i];
            nq += q.v[i] * q.v[i];
        }
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::sqrt(np) * std::sqrt(nq));
    }
}

TEST_CASE("mass is preserved per radial ring") {
    const PolarImage p = random_polar(201, 5, 3);
    const PolarImage out = angular_convolve(p, make_kernel("gaussian-2", 201));
    for (int i = 0; i < p.n_r; ++i) {
        double a = 0, b = 0;
        for (int j = 0; j < p.n_phi; ++j) {
            a += p.at(j, i);
            b += out.at(j, i);
        }
        CHECK(b == doctest::Approx(a).epsilon(1e-12));
    }
}

TEST_CASE("shift equivariance is exact") {
    const PolarImage p = random_polar(97, 4, 4);
    const AngularKernel k = make_kernel("gaussian-1", 97);
    PolarImage shifted(97, 4);
    const int s = 13;
    for (int j = 0; j < 97; ++j)
        for (int i = 0; i < 4; ++i) shifted.at((j + s) % 97, i) = p.at(j, i);
    const PolarImage a = angular_convolve(shifted, k);
    const PolarImage b = angular_convolve(p, k);
    for (int j = 0; j < 97; ++j)
        for (int i = 0; i < 4; ++i) CHECK(a.at((j + s) % 97, i) == b.at(j, i));
}

TEST_CASE("direct path agrees with the spectral oracle") {
    const PolarImage p = random_polar(67, 5, 6);
    for (const char* name : {"indicator-10", "gaussian-2"}) {
        const AngularKernel k = make_kernel(name, 67);
        const PolarImage a = angular_convolve(p, k);
        const PolarImage b = fft_convolve(p, k);
        double num = 0, den = 0;
        for (size_t i = 0; i < a.v.size(); ++i) {
            num += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
            den += a.v[i] * a.v[i];
        }
        CHECK(std::sqrt(num / den) < 1e-10);
    }
}

TEST_CASE("convolution is non-expansive in max norm") {
    const PolarImage p = random_polar(201, 6, 8);
    double pin = 0;
    for (double v : p.v) pin = std::max(pin, std::abs(v));
    for (const char* name : {"indicator-10", "indicator-20", "gaussian-1", "gaussian-2"}) {
        const PolarImage out = angular_convolve(p, make_kernel(name, 201));
        for (double v : out.v) CHECK(std::abs(v) <= pin * (1 + 1e-12));
    }
}

TEST_CASE("kernel file round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "pat_kernel_test";
    std::filesystem::create_directories(dir);
    const AngularKernel k = make_kernel("gaussian-2", 201);
    save_kernel(dir / "k.txt", k);
    const AngularKernel back = load_kernel(dir / "k.txt", 201);
    REQUIRE(back.taps() == k.taps());
    for (int i = 0; i < k.taps(); ++i) CHECK(back.w[i] == doctest::Approx(k.w[i]).epsilon(1e-15));
}

TEST_CASE("kernel/grid mismatch is rejected") {
    const PolarImage p = random_polar(97, 4, 9);
    CHECK_THROWS_AS(angular_convolve(p, make_kernel("delta", 96)), std::invalid_argument);
}
