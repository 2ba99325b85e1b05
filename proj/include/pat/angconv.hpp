#pragma once

#include "pat/grid.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pat {

enum class KernelName { Delta, Indicator10, Indicator20, Gaussian1, Gaussian2, Custom };

std::string to_string(KernelName name);
KernelName kernel_name_from_string(const std::string& s);

// Periodized discrete aperture weights, odd length K <= n_phi, centered,
// nonnegative, summing to 1.
struct AngularKernel {
    std::vector<double> w;
    KernelName name = KernelName::Custom;
    int n_phi = 0;

    int taps() const { return static_cast<int>(w.size()); }
    int center() const { return (taps() - 1) / 2; }
    bool is_delta() const { return w.size() == 1 && w[0] == 1.0; }
};

// Builds one of the named kernels resolved against an angular grid.
// Indicator-a: half-width n = floor((a/720)*n_phi), uniform on [-n,n] within a
// 63-tap window.  Gaussian-s: exp(-(dl/s)^2/2) on 63 taps.  Delta: [1].
AngularKernel make_kernel(KernelName name, int n_phi);
AngularKernel make_kernel(const std::string& name, int n_phi);

// Validates custom weights (odd length, nonnegative) and normalizes to sum 1.
AngularKernel make_custom_kernel(std::vector<double> weights, int n_phi);

// Circular convolution along phi, ring by ring:
//   out[j,i] = sum_k w[k] * p[(j - k + center) mod n_phi, i].
PolarImage angular_convolve(const PolarImage& p, const AngularKernel& w);

// Circular correlation (index-reversed kernel); exact adjoint of
// angular_convolve under the Euclidean inner product on the polar lattice.
PolarImage angular_convolve_adjoint(const PolarImage& p, const AngularKernel& w);

// Kernel file format: first line K, then K weights, one per line.
void save_kernel(const std::filesystem::path& path, const AngularKernel& k);
AngularKernel load_kernel(const std::filesystem::path& path, int n_phi);

} // namespace pat
