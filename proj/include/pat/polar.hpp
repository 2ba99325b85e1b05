#pragma once

#include "pat/grid.hpp"

namespace pat {

// Cartesian -> polar resampling: samples x at (r_i cos phi_j, r_i sin phi_j)
// by bilinear interpolation.  Points outside [-1,1]^2 map to 0.
PolarImage to_polar(const CartesianImage& x, const GridSpec& spec);

// Polar -> Cartesian resampling: samples p at (|r|, arg r) per pixel by
// bilinear interpolation, circular in phi.  Radii below r_0 use ring 0,
// radii in (r_{N_r-1}, 1] clamp to the outermost ring, pixels outside the
// closed unit disc are exactly 0.
CartesianImage to_cartesian(const PolarImage& p, const GridSpec& spec);

// Bilinear sample of an M x M pixel-centered image at continuous (x, y)
// in [-1,1]^2 coordinates, clamped to the pixel-center hull.
double sample_bilinear(const CartesianImage& img, double x, double y);

} // namespace pat
