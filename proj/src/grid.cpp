#include "pat/grid.hpp"

#include <cmath>
#include <limits>

namespace pat {

GridSpec make_grid(int M) {
    if (M < 16 || M % 2 != 0) {
        throw std::invalid_argument("make_grid: M must be even and >= 16, got " +
                                    std::to_string(M));
    }
    GridSpec g;
    g.M = M;
    g.n_r = M / 2;
    g.n_phi = static_cast<int>(std::floor(M_PI * M));
    g.n_det = g.n_phi;
    g.n_t = M;
    g.T = 2.0;
    return g;
}

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("rel_l2: size mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        num += d * d;
        den += b[i] * b[i];
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

} // namespace pat
