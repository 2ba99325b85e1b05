#include "pat/polar.hpp"

#include <algorithm>
#include <cmath>

namespace pat {

double sample_bilinear(const CartesianImage& img, double x, double y) {
    const int M = img.M;
    // continuous pixel index; pixel centers at -1 + (2i+1)/M
    const double u = (x + 1.0) * M / 2.0 - 0.5;
    const double w = (y + 1.0) * M / 2.0 - 0.5;
    const double uc = std::clamp(u, 0.0, static_cast<double>(M - 1));
    const double wc = std::clamp(w, 0.0, static_cast<double>(M - 1));
    const int i0 = std::min(static_cast<int>(uc), M - 2);
    const int j0 = std::min(static_cast<int>(wc), M - 2);
    const double fu = uc - i0;
    const double fw = wc - j0;
    // nested lerp form reproduces constants exactly
    const double a = img.at(i0, j0) + fu * (img.at(i0 + 1, j0) - img.at(i0, j0));
    const double b = img.at(i0, j0 + 1) + fu * (img.at(i0 + 1, j0 + 1) - img.at(i0, j0 + 1));
    return a + fw * (b - a);
}

PolarImage to_polar(const CartesianImage& x, const GridSpec& spec) {
    if (x.M != spec.M) throw std::invalid_argument("to_polar: grid mismatch");
    PolarImage p(spec.n_phi, spec.n_r);
    for (int j = 0; j < spec.n_phi; ++j) {
        const double phi = 2.0 * M_PI * j / spec.n_phi;
        const double c = std::cos(phi), s = std::sin(phi);
        for (int i = 0; i < spec.n_r; ++i) {
            const double r = (i + 0.5) / spec.n_r;
            const double px = r * c, py = r * s;
            if (px < -1.0 || px > 1.0 || py < -1.0 || py > 1.0) {
                p.at(j, i) = 0.0;
            } else {
                p.at(j, i) = sample_bilinear(x, px, py);
            }
        }
    }
    return p;
}

CartesianImage to_cartesian(const PolarImage& p, const GridSpec& spec) {
    if (p.n_phi != spec.n_phi || p.n_r != spec.n_r)
        throw std::invalid_argument("to_cartesian: grid mismatch");
    CartesianImage out(spec.M);
    const int n_phi = spec.n_phi, n_r = spec.n_r;
    for (int iy = 0; iy < spec.M; ++iy) {
        const double y = pixel_center(iy, spec.M);
        for (int ix = 0; ix < spec.M; ++ix) {
            const double x = pixel_center(ix, spec.M);
            const double r = std::hypot(x, y);
            if (r > 1.0) continue; // outside the disc
            double theta = std::atan2(y, x);
            if (theta < 0) theta += 2.0 * M_PI;
            // angular index, circular
            double jw = theta * n_phi / (2.0 * M_PI);
            int j0 = static_cast<int>(jw) % n_phi;
            const double fj = jw - std::floor(jw);
            const int j1 = (j0 + 1) % n_phi;
            // radial index, clamped; r_i = (i+0.5)/n_r
            const double iw = std::clamp(r * n_r - 0.5, 0.0, static_cast<double>(n_r - 1));
            const int i0 = std::min(static_cast<int>(iw), n_r - 2);
            const double fi = iw - i0;
            const double a = p.at(j0, i0) + fj * (p.at(j1, i0) - p.at(j0, i0));
            const double b = p.at(j0, i0 + 1) + fj * (p.at(j1, i0 + 1) - p.at(j0, i0 + 1));
            out.at(ix, iy) = a + fi * (b - a);
        }
    }
    return out;
}

} // namespace pat
