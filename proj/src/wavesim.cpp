#include "pat/wavesim.hpp"

#include "pat/polar.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

namespace pat {

namespace {

struct FftwBuffer {
    fftw_complex* p = nullptr;
    explicit FftwBuffer(size_t n) {
        p = fftw_alloc_complex(n);
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

} // namespace

struct WaveSolver::Impl {
    int P;             // computational grid size (M or 2M)
    bool padded;
    std::vector<double> kmag; // |kappa| on the P x P FFT layout
    FftwBuffer in, freq, out;
    fftw_plan fwd = nullptr, bwd = nullptr;

    Impl(const GridSpec& g, bool zero_pad)
        : P(zero_pad ? 2 * g.M : g.M),
          padded(zero_pad),
          kmag(static_cast<size_t>(P) * P),
          in(static_cast<size_t>(P) * P),
          freq(static_cast<size_t>(P) * P),
          out(static_cast<size_t>(P) * P) {
        // grid spacing h = 2/M; discrete angular frequencies 2*pi*k~/(P*h)
        const double h = 2.0 / g.M;
        const double dk = 2.0 * M_PI / (P * h);
        for (int ky = 0; ky < P; ++ky) {
            const int sy = ky <= P / 2 ? ky : ky - P;
            for (int kx = 0; kx < P; ++kx) {
                const int sx = kx <= P / 2 ? kx : kx - P;
                kmag[static_cast<size_t>(ky) * P + kx] = dk * std::hypot(sx, sy);
            }
        }
        fwd = fftw_plan_dft_2d(P, P, in.p, freq.p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(P, P, freq.p, out.p, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("WaveSolver: FFTW plan creation failed");
    }

    ~Impl() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }

    int spec_M = 0;

    // loads x into the (padded) input buffer and runs the forward FFT
    void load(const CartesianImage& x) {
        spec_M = x.M;
        const int off = padded ? (P - x.M) / 2 : 0;
        for (size_t i = 0; i < static_cast<size_t>(P) * P; ++i) in.p[i][0] = in.p[i][1] = 0.0;
        for (int iy = 0; iy < x.M; ++iy)
            for (int ix = 0; ix < x.M; ++ix)
                in.p[static_cast<size_t>(iy + off) * P + (ix + off)][0] = x.at(ix, iy);
        fftw_execute(fwd);
    }

    // propagates the loaded spectrum to time t; result in out (unnormalized).
    // freq keeps FFT(x) intact so successive times reuse one forward FFT;
    // `in` doubles as scratch so bwd runs out-of-place exactly as planned.
    void propagate(double t) {
        const size_t n = static_cast<size_t>(P) * P;
        for (size_t i = 0; i < n; ++i) {
            const double c = std::cos(t * kmag[i]);
            in.p[i][0] = freq.p[i][0] * c;
            in.p[i][1] = freq.p[i][1] * c;
        }
        fftw_execute_dft(bwd, in.p, out.p);
    }

    double field(int ix, int iy) const {
        const size_t n = static_cast<size_t>(P) * P;
        return out.p[static_cast<size_t>(iy) * P + ix][0] / static_cast<double>(n);
    }

    // bilinear sample of the propagated field at physical (x, y); the
    // computational domain spans [-S, S]^2 with S = P/M
    double sample(double x, double y) const {
        const double h = 2.0 / spec_M;
        const double S = P * h / 2.0;
        double u = (x + S) / h - 0.5;
        double w = (y + S) / h - 0.5;
        if (padded) {
            u = std::clamp(u, 0.0, static_cast<double>(P - 1));
            w = std::clamp(w, 0.0, static_cast<double>(P - 1));
            const int i0 = std::min(static_cast<int>(u), P - 2);
            const int j0 = std::min(static_cast<int>(w), P - 2);
            const double fu = u - i0, fw = w - j0;
            const double a = field(i0, j0) + fu * (field(i0 + 1, j0) - field(i0, j0));
            const double b = field(i0, j0 + 1) + fu * (field(i0 + 1, j0 + 1) - field(i0, j0 + 1));
            return a + fw * (b - a);
        }
        // periodic wrap matches the unpadded solver's torus geometry
        const double uf = std::floor(u), wf = std::floor(w);
        const int i0 = ((static_cast<int>(uf) % P) + P) % P;
        const int j0 = ((static_cast<int>(wf) % P) + P) % P;
        const int i1 = (i0 + 1) % P, j1 = (j0 + 1) % P;
        const double fu = u - uf, fw = w - wf;
        const double a = field(i0, j0) + fu * (field(i1, j0) - field(i0, j0));
        const double b = field(i0, j1) + fu * (field(i1, j1) - field(i0, j1));
        return a + fw * (b - a);
    }
};

WaveSolver::WaveSolver(const GridSpec& spec, bool zero_pad)
    : spec_(spec), impl_(std::make_unique<Impl>(spec, zero_pad)) {}

WaveSolver::~WaveSolver() = default;

CartesianImage WaveSolver::snapshot(const CartesianImage& x, double t) {
    if (x.M != spec_.M) throw std::invalid_argument("WaveSolver::snapshot: grid mismatch");
    if (t < 0) throw std::invalid_argument("WaveSolver::snapshot: t must be >= 0");
    if (!all_finite(x.v)) throw std::invalid_argument("WaveSolver::snapshot: non-finite input");
    impl_->load(x);
    impl_->propagate(t);
    CartesianImage res(spec_.M);
    const int off = impl_->padded ? (impl_->P - spec_.M) / 2 : 0;
    for (int iy = 0; iy < spec_.M; ++iy)
        for (int ix = 0; ix < spec_.M; ++ix) res.at(ix, iy) = impl_->field(ix + off, iy + off);
    return res;
}

Sinogram WaveSolver::forward(const CartesianImage& x) {
    if (x.M != spec_.M) throw std::invalid_argument("WaveSolver::forward: grid mismatch");
    if (!all_finite(x.v)) throw std::invalid_argument("WaveSolver::forward: non-finite input");
    impl_->load(x);
    Sinogram g(spec_.n_det, spec_.n_t);
    std::vector<double> cx(spec_.n_det), cy(spec_.n_det);
    for (int k = 0; k < spec_.n_det; ++k) {
        const double phi = 2.0 * M_PI * k / spec_.n_det;
        cx[k] = std::cos(phi);
        cy[k] = std::sin(phi);
    }
    for (int n = 0; n < spec_.n_t; ++n) {
        const double t = spec_.T * n / spec_.n_t;
        impl_->propagate(t);
        for (int k = 0; k < spec_.n_det; ++k) g.at(k, n) = impl_->sample(cx[k], cy[k]);
    }
    return g;
}

CartesianImage wave_snapshot(const CartesianImage& x, double t, bool zero_pad) {
    WaveSolver solver(make_grid(x.M), zero_pad);
    return solver.snapshot(x, t);
}

Sinogram forward(const CartesianImage& x, const GridSpec& spec, bool zero_pad) {
    WaveSolver solver(spec, zero_pad);
    return solver.forward(x);
}

Sinogram forward_blurred(const CartesianImage& x, const AngularKernel& w, const GridSpec& spec,
                         bool zero_pad) {
    if (w.is_delta()) return forward(x, spec, zero_pad);
    const PolarImage blurred = angular_convolve(to_polar(x, spec), w);
    return forward(to_cartesian(blurred, spec), spec, zero_pad);
}

} // namespace pat
