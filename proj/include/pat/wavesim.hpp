#pragma once

#include "pat/angconv.hpp"
#include "pat/grid.hpp"

#include <memory>

namespace pat {

// Spectral solver for the 2D wave equation with initial data x and zero
// initial velocity on the periodic extension of the image domain:
//   u(.,t) = Re[ IFFT( FFT(x) * cos(t*|kappa|) ) ].
// With zero_pad the computation runs on a 2x grid ([-2,2]^2) to suppress
// periodic wrap-around; phantoms supported in the unit disc stay clean
// over t in [0,2].
class WaveSolver {
  public:
    explicit WaveSolver(const GridSpec& spec, bool zero_pad = true);
    ~WaveSolver();
    WaveSolver(const WaveSolver&) = delete;
    WaveSolver& operator=(const WaveSolver&) = delete;

    const GridSpec& spec() const { return spec_; }

    // Pressure field at time t, cropped back to the M x M image grid.
    CartesianImage snapshot(const CartesianImage& x, double t);

    // Boundary trace: for each t_n samples the field at the detector points
    // (cos phi_k, sin phi_k) by bilinear interpolation.
    Sinogram forward(const CartesianImage& x);

  private:
    struct Impl;
    GridSpec spec_;
    std::unique_ptr<Impl> impl_;
};

CartesianImage wave_snapshot(const CartesianImage& x, double t, bool zero_pad = true);
Sinogram forward(const CartesianImage& x, const GridSpec& spec, bool zero_pad = true);

// Extended-detector data: U C A P x.  A delta kernel short-circuits to the
// ideal forward map.
Sinogram forward_blurred(const CartesianImage& x, const AngularKernel& w, const GridSpec& spec,
                         bool zero_pad = true);

} // namespace pat
