#include "pat/angconv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace pat {

namespace {

constexpr int kWindowTaps = 63; // fixed discrete support of the named kernels

void normalize(std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += x;
    if (s <= 0.0) throw std::invalid_argument("kernel weights must have positive sum");
    for (double& x : w) x /= s;
}

AngularKernel finish(std::vector<double> w, KernelName name, int n_phi) {
    normalize(w);
    AngularKernel k;
    k.w = std::move(w);
    k.name = name;
    k.n_phi = n_phi;
    return k;
}

} // namespace

std::string to_string(KernelName name) {
    switch (name) {
        case KernelName::Delta: return "delta";
        case KernelName::Indicator10: return "indicator-10";
        case KernelName::Indicator20: return "indicator-20";
        case KernelName::Gaussian1: return "gaussian-1";
        case KernelName::Gaussian2: return "gaussian-2";
        case KernelName::Custom: return "custom";
    }
    return "custom";
}

KernelName kernel_name_from_string(const std::string& s) {
    if (s == "delta") return KernelName::Delta;
    if (s == "indicator-10") return KernelName::Indicator10;
    if (s == "indicator-20") return KernelName::Indicator20;
    if (s == "gaussian-1") return KernelName::Gaussian1;
    if (s == "gaussian-2") return KernelName::Gaussian2;
    if (s == "custom") return KernelName::Custom;
    throw std::invalid_argument("unknown kernel name: " + s);
}

AngularKernel make_kernel(KernelName name, int n_phi) {
    if (name == KernelName::Delta) {
        if (n_phi < 1) throw std::invalid_argument("make_kernel: n_phi must be positive");
        AngularKernel k;
        k.w = {1.0};
        k.name = KernelName::Delta;
        k.n_phi = n_phi;
        return k;
    }
    if (n_phi < kWindowTaps)
        throw std::invalid_argument("make_kernel: named kernels need n_phi >= 63");

    const int c = (kWindowTaps - 1) / 2;
    std::vector<double> w(kWindowTaps, 0.0);
    switch (name) {
        case KernelName::Indicator10:
        case KernelName::Indicator20: {
            const int aperture_deg = (name == KernelName::Indicator10) ? 10 : 20;
            // half-width in angular samples; central 63 taps kept if wider
            const int n = static_cast<int>(std::floor(aperture_deg / 720.0 * n_phi));
            for (int dl = -std::min(n, c); dl <= std::min(n, c); ++dl) w[c + dl] = 1.0;
            break;
        }
        case KernelName::Gaussian1:
        case KernelName::Gaussian2: {
            const double sigma = (name == KernelName::Gaussian1) ? 1.0 : 2.0;
            for (int dl = -c; dl <= c; ++dl)
                w[c + dl] = std::exp(-0.5 * (dl / sigma) * (dl / sigma));
            break;
        }
        default:
            throw std::invalid_argument("make_kernel: custom kernels come from make_custom_kernel");
    }
    return finish(std::move(w), name, n_phi);
}

AngularKernel make_kernel(const std::string& name, int n_phi) {
    return make_kernel(kernel_name_from_string(name), n_phi);
}

AngularKernel make_custom_kernel(std::vector<double> weights, int n_phi) {
    if (weights.empty() || weights.size() % 2 == 0)
        throw std::invalid_argument("custom kernel must have odd length");
    if (static_cast<int>(weights.size()) > n_phi)
        throw std::invalid_argument("custom kernel longer than the angular grid");
    for (double x : weights)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument("custom kernel weights must be finite and >= 0");
    return finish(std::move(weights), KernelName::Custom, n_phi);
}

PolarImage angular_convolve(const PolarImage& p, const AngularKernel& w) {
    if (w.n_phi != p.n_phi) throw std::invalid_argument("angular_convolve: kernel/grid mismatch");
    if (w.is_delta()) return p; // bit-exact identity
    const int n_phi = p.n_phi, n_r = p.n_r, K = w.taps(), c = w.center();
    PolarImage out(n_phi, n_r);
    for (int j = 0; j < n_phi; ++j) {
        double* dst = &out.v[static_cast<size_t>(j) * n_r];
        for (int k = 0; k < K; ++k) {
            const double wk = w.w[k];
            if (wk == 0.0) continue;
            int src_j = (j - k + c) % n_phi;
            if (src_j < 0) src_j += n_phi;
            const double* src = &p.v[static_cast<size_t>(src_j) * n_r];
            for (int i = 0; i < n_r; ++i) dst[i] += wk * src[i];
        }
    }
    return out;
}

PolarImage angular_convolve_adjoint(const PolarImage& p, const AngularKernel& w) {
    if (w.n_phi != p.n_phi)
        throw std::invalid_argument("angular_convolve_adjoint: kernel/grid mismatch");
    if (w.is_delta()) return p;
    const int n_phi = p.n_phi, n_r = p.n_r, K = w.taps(), c = w.center();
    PolarImage out(n_phi, n_r);
    for (int j = 0; j < n_phi; ++j) {
        double* dst = &out.v[static_cast<size_t>(j) * n_r];
        for (int k = 0; k < K; ++k) {
            const double wk = w.w[k];
            if (wk == 0.0) continue;
            const int src_j = (j + k - c + n_phi) % n_phi;
            const double* src = &p.v[static_cast<size_t>(src_j) * n_r];
            for (int i = 0; i < n_r; ++i) dst[i] += wk * src[i];
        }
    }
    return out;
}

void save_kernel(const std::filesystem::path& path, const AngularKernel& k) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_kernel: cannot open " + path.string());
    os << k.taps() << "\n";
    os.precision(17);
    for (double x : k.w) os << x << "\n";
}

AngularKernel load_kernel(const std::filesystem::path& path, int n_phi) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_kernel: cannot open " + path.string());
    int K = 0;
    is >> K;
    if (!is || K <= 0) throw std::runtime_error("load_kernel: bad tap count in " + path.string());
    std::vector<double> w(K);
    for (double& x : w) is >> x;
    if (!is) throw std::runtime_error("load_kernel: truncated file " + path.string());
    return make_custom_kernel(std::move(w), n_phi);
}

} // namespace pat
