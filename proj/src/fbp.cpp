#include "pat/fbp.hpp"

#include "pat/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pat {

double fbp_phi(double r1, double r2, double T) {
    if (r1 == r2) return 0.0;
    if (r1 > r2) {
        const double a = std::sqrt(std::max(T * T - r2 * r2, 0.0));
        const double b = std::sqrt(r1 * r1 - r2 * r2);
        if (a <= b) return 0.0; // r1 >= T: outside the formula's domain
        return 0.5 * std::log((a - b) / (a + b));
    }
    const double a = std::sqrt(std::max(T * T - r1 * r1, 0.0));
    const double b = std::sqrt(r2 * r2 - r1 * r1);
    return std::atan(a / b);
}

namespace {

// The filtered-backprojection integrand splits at t = rho into
//   Phi_T(rho,t)/sqrt(|rho^2-t^2|) = K_smooth(rho,t) + (pi/2)*[t>rho]/sqrt(t^2-rho^2),
// where K_smooth is continuous across t = rho.  Both branches below are
// cancellation-free near the split.
double fbp_kernel_smooth(double rho, double t, double T) {
    if (t < rho) {
        const double a = std::sqrt(std::max(T * T - t * t, 0.0));
        const double b = std::sqrt(rho * rho - t * t);
        if (b < 1e-14) return -1.0 / (a + b);
        return 0.5 * std::log1p(-2.0 * b / (a + b)) / b;
    }
    const double c = std::sqrt(std::max(T * T - rho * rho, 0.0));
    const double d = std::sqrt(t * t - rho * rho);
    if (d < 1e-14) return -1.0 / c;
    return -std::atan(d / c) / d;
}

} // namespace

FbpKernelTable::FbpKernelTable(const GridSpec& spec) : spec_(spec) {
    // rho resolution 4x finer than the time grid keeps the interpolation
    // error of the filtered profiles well below the quadrature error
    n_rho_ = 4 * std::max(spec.n_t, spec.M);
    drho_ = 2.0 / n_rho_;
    const int n_t = spec.n_t;
    const double dt = spec.T / n_t;
    w_.resize(static_cast<size_t>(n_rho_) * n_t);
    for (int m = 0; m < n_rho_; ++m) {
        const double r = rho(m);
        for (int n = 0; n < n_t; ++n) {
            const double t_lo = n * dt, t_hi = (n + 1) * dt, t_mid = (n + 0.5) * dt;
            double w = fbp_kernel_smooth(r, t_mid, spec_.T) * dt;
            if (t_hi > r) {
                // exact cell integral of the singular factor:
                // int dt/sqrt(t^2-r^2) = log(t + sqrt(t^2-r^2))
                const double lo = std::max(t_lo, r);
                const double hi_part = t_hi + std::sqrt(t_hi * t_hi - r * r);
                const double lo_part = lo + std::sqrt(std::max(lo * lo - r * r, 0.0));
                w += 0.5 * M_PI * std::log(hi_part / lo_part);
            }
            w_[static_cast<size_t>(m) * n_t + n] = w;
        }
    }
}

std::vector<double> FbpKernelTable::filter_row(const double* row) const {
    const int n_t = spec_.n_t;
    // data at time midpoints by linear interpolation; last midpoint holds the
    // final sample
    std::vector<double> mid(n_t);
    for (int n = 0; n + 1 < n_t; ++n) mid[n] = 0.5 * (row[n] + row[n + 1]);
    mid[n_t - 1] = row[n_t - 1];
    std::vector<double> q(n_rho_);
    for (int m = 0; m < n_rho_; ++m) {
        const double* wm = &w_[static_cast<size_t>(m) * n_t];
        double acc = 0.0;
        for (int n = 0; n < n_t; ++n) acc += wm[n] * mid[n];
        q[m] = acc;
    }
    return q;
}

double FbpKernelTable::interp(const std::vector<double>& q, double rho_val) const {
    const double u = std::clamp(rho_val / drho_ - 0.5, 0.0, static_cast<double>(n_rho_ - 1));
    const int m0 = std::min(static_cast<int>(u), n_rho_ - 2);
    const double f = u - m0;
    return (1 - f) * q[m0] + f * q[m0 + 1];
}

const FbpKernelTable& fbp_table(const GridSpec& spec) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, double>, std::unique_ptr<FbpKernelTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_tuple(spec.M, spec.n_det, spec.n_t, spec.T);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<FbpKernelTable>(spec)).first;
    }
    return *it->second;
}

CartesianImage fbp_inverse(const Sinogram& g, const GridSpec& spec) {
    if (g.n_det != spec.n_det || g.n_t != spec.n_t)
        throw std::invalid_argument("fbp_inverse: grid mismatch");
    if (!all_finite(g.v)) throw std::invalid_argument("fbp_inverse: non-finite data");
    const FbpKernelTable& table = fbp_table(spec);
    const int M = spec.M, n_det = spec.n_det;

    // filtered profiles per detector
    std::vector<std::vector<double>> q(n_det);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n_det; ++k) q[k] = table.filter_row(&g.v[static_cast<size_t>(k) * spec.n_t]);

    std::vector<double> det_x(n_det), det_y(n_det);
    for (int k = 0; k < n_det; ++k) {
        const double phi = 2.0 * M_PI * k / n_det;
        det_x[k] = std::cos(phi);
        det_y[k] = std::sin(phi);
    }

    // backprojected vector field F(r) = (2pi/n_det) sum_k nu_k q_k(|r - r0_k|)
    const double wdet = 2.0 * M_PI / n_det;
    std::vector<double> Fx(static_cast<size_t>(M) * M, 0.0), Fy(Fx);
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < M; ++iy) {
        const double y = pixel_center(iy, M);
        for (int ix = 0; ix < M; ++ix) {
            const double x = pixel_center(ix, M);
            double ax = 0.0, ay = 0.0;
            for (int k = 0; k < n_det; ++k) {
                const double rho = std::hypot(x - det_x[k], y - det_y[k]);
                const double qv = table.interp(q[k], rho);
                ax += det_x[k] * qv;
                ay += det_y[k] * qv;
            }
            Fx[static_cast<size_t>(iy) * M + ix] = wdet * ax;
            Fy[static_cast<size_t>(iy) * M + ix] = wdet * ay;
        }
    }

    // divergence by central differences, one-sided second order at borders
    const double h = 2.0 / M;
    auto ddx = [&](const std::vector<double>& F, int ix, int iy) {
        const size_t row = static_cast<size_t>(iy) * M;
        if (ix == 0) return (-3 * F[row] + 4 * F[row + 1] - F[row + 2]) / (2 * h);
        if (ix == M - 1)
            return (3 * F[row + M - 1] - 4 * F[row + M - 2] + F[row + M - 3]) / (2 * h);
        return (F[row + ix + 1] - F[row + ix - 1]) / (2 * h);
    };
    auto ddy = [&](const std::vector<double>& F, int ix, int iy) {
        if (iy == 0)
            return (-3 * F[ix] + 4 * F[static_cast<size_t>(M) + ix] -
                    F[static_cast<size_t>(2) * M + ix]) /
                   (2 * h);
        if (iy == M - 1)
            return (3 * F[static_cast<size_t>(M - 1) * M + ix] -
                    4 * F[static_cast<size_t>(M - 2) * M + ix] +
                    F[static_cast<size_t>(M - 3) * M + ix]) /
                   (2 * h);
        return (F[static_cast<size_t>(iy + 1) * M + ix] - F[static_cast<size_t>(iy - 1) * M + ix]) /
               (2 * h);
    };

    CartesianImage out(M);
    const double scale = 2.0 / (M_PI * M_PI);
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < M; ++iy) {
        const double y = pixel_center(iy, M);
        for (int ix = 0; ix < M; ++ix) {
            const double x = pixel_center(ix, M);
            if (x * x + y * y >= 1.0) continue; // formula holds inside the disc
            out.at(ix, iy) = scale * (ddx(Fx, ix, iy) + ddy(Fy, ix, iy));
        }
    }
    return out;
}

double masked_rel_l2(const CartesianImage& a, const CartesianImage& b, double radius) {
    if (a.M != b.M) throw std::invalid_argument("masked_rel_l2: size mismatch");
    const int M = a.M;
    double num = 0.0, den = 0.0;
    for (int iy = 0; iy < M; ++iy) {
        const double y = pixel_center(iy, M);
        for (int ix = 0; ix < M; ++ix) {
            const double x = pixel_center(ix, M);
            if (x * x + y * y > radius * radius) continue;
            const double d = a.at(ix, iy) - b.at(ix, iy);
            num += d * d;
            den += b.at(ix, iy) * b.at(ix, iy);
        }
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

double left_inverse_residual(const CartesianImage& x, const GridSpec& spec, double radius) {
    const CartesianImage rec = fbp_inverse(forward(x, spec), spec);
    if (l2_norm(x.v) == 0.0) return 0.0;
    return masked_rel_l2(rec, x, radius);
}

} // namespace pat
