#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pat {

// All grids live on the unit disc geometry: images on [-1,1]^2, detectors on
// the unit circle, time in [0,T) with sound speed 1.

struct GridSpec {
    int M = 0;      // Cartesian grid is M x M
    int n_r = 0;    // polar radial samples, M/2 unless overridden
    int n_phi = 0;  // polar angular samples, floor(pi*M) unless overridden
    int n_det = 0;  // detectors on the unit circle, floor(pi*M) unless overridden
    int n_t = 0;    // time samples, M unless overridden
    double T = 2.0; // final time; t_n = n*T/n_t

    bool operator==(const GridSpec&) const = default;
};

// Derives the full sampling layout from the image size M (even, >= 16).
GridSpec make_grid(int M);

// M x M image over [-1,1]^2, pixel centers x_i = -1 + (2i+1)/M.
// Row-major with y as the slow axis: v[iy*M + ix].
struct CartesianImage {
    int M = 0;
    std::vector<double> v;

    CartesianImage() = default;
    explicit CartesianImage(int M_) : M(M_), v(static_cast<size_t>(M_) * M_, 0.0) {}

    double& at(int ix, int iy) { return v[static_cast<size_t>(iy) * M + ix]; }
    double at(int ix, int iy) const { return v[static_cast<size_t>(iy) * M + ix]; }
    size_t size() const { return v.size(); }
};

// N_phi x N_r polar image; angle is the slow axis so each radial ring
// p[j*n_r .. j*n_r+n_r) is contiguous per angle, and a fixed radius is
// stride-n_r along phi.  phi_j = 2*pi*j/n_phi, r_i = (i+0.5)/n_r.
// Index arithmetic along phi is modulo n_phi.
struct PolarImage {
    int n_phi = 0;
    int n_r = 0;
    std::vector<double> v;

    PolarImage() = default;
    PolarImage(int n_phi_, int n_r_)
        : n_phi(n_phi_), n_r(n_r_), v(static_cast<size_t>(n_phi_) * n_r_, 0.0) {}

    double& at(int j, int i) { return v[static_cast<size_t>(j) * n_r + i]; }
    double at(int j, int i) const { return v[static_cast<size_t>(j) * n_r + i]; }
    size_t size() const { return v.size(); }
};

// N_det x N_t pressure samples; detector is the slow axis.
// Detector k sits at angle phi_k = 2*pi*k/n_det, time t_n = n*T/n_t.
struct Sinogram {
    int n_det = 0;
    int n_t = 0;
    std::vector<double> v;

    Sinogram() = default;
    Sinogram(int n_det_, int n_t_)
        : n_det(n_det_), n_t(n_t_), v(static_cast<size_t>(n_det_) * n_t_, 0.0) {}

    double& at(int k, int n) { return v[static_cast<size_t>(k) * n_t + n]; }
    double at(int k, int n) const { return v[static_cast<size_t>(k) * n_t + n]; }
    size_t size() const { return v.size(); }
};

// Pixel center coordinates.
inline double pixel_center(int i, int M) { return -1.0 + (2.0 * i + 1.0) / M; }

double l2_norm(const std::vector<double>& v);
bool all_finite(const std::vector<double>& v);

// Relative L2 distance ||a-b|| / ||b||; returns 0 when both are zero.
double rel_l2(const std::vector<double>& a, const std::vector<double>& b);

} // namespace pat
