#pragma once

#include "pat/grid.hpp"

namespace pat {

// Kernel of the finite-time filtered backprojection: branch on r1 vs r2,
// both limits finite, 0 on the diagonal.
double fbp_phi(double r1, double r2, double T);

// Precomputed quadrature weights over a cell-centered rho grid on (0, 2) and
// the time cells of the data grid.  The integrand Phi_T(rho,t)/sqrt(|rho^2 -
// t^2|) splits into a part continuous across t = rho (midpoint rule) plus the
// singular factor (pi/2)/sqrt(t^2 - rho^2), which is integrated in closed
// form per cell, so no quadrature node ever sits near the singularity.
class FbpKernelTable {
  public:
    explicit FbpKernelTable(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int n_rho() const { return n_rho_; }
    double rho(int m) const { return (m + 0.5) * drho_; }
    double weight(int m, int n) const { return w_[static_cast<size_t>(m) * spec_.n_t + n]; }

    // Per-detector filtered profile q(rho) = sum_n W(rho, t_n) * g~(t_n)
    // where g~ interpolates the detector row at the time midpoints.
    std::vector<double> filter_row(const double* row) const;

    // Linear interpolation of a filtered profile at distance rho, clamped to
    // the table range.
    double interp(const std::vector<double>& q, double rho) const;

  private:
    GridSpec spec_;
    int n_rho_;
    double drho_;
    std::vector<double> w_;
};

// Shared, lazily built table per grid layout.
const FbpKernelTable& fbp_table(const GridSpec& spec);

// Finite-time left inverse of the ideal forward map: filtered backprojection
// of the boundary data followed by a discrete divergence.  Output is 0
// outside the closed unit disc.
CartesianImage fbp_inverse(const Sinogram& g, const GridSpec& spec);

// || inverse(forward(x)) - x ||_2 / ||x||_2 restricted to the disc of the
// given radius.
double left_inverse_residual(const CartesianImage& x, const GridSpec& spec,
                             double radius = 0.9);

// Relative L2 distance between two images over pixels inside `radius`.
double masked_rel_l2(const CartesianImage& a, const CartesianImage& b, double radius);

} // namespace pat
