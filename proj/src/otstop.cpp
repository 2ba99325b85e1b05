#include "pat/otstop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pat {

std::vector<int> solve_assignment(const std::vector<double>& cost, int n) {
    if (n <= 0 || cost.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("solve_assignment: bad cost matrix");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // shortest augmenting path with dual potentials, 1-based internals
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[static_cast<size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

std::pair<double, TransportPlan> emd(const std::vector<std::vector<double>>& samples_a,
                                     const std::vector<std::vector<double>>& samples_b) {
    const int n = static_cast<int>(samples_a.size());
    if (n == 0 || samples_b.size() != static_cast<size_t>(n))
        throw std::invalid_argument("emd: sample counts must match and be >= 1");
    const size_t dim = samples_a[0].size();
    for (const auto& s : samples_a)
        if (s.size() != dim) throw std::invalid_argument("emd: dimension mismatch");
    for (const auto& s : samples_b)
        if (s.size() != dim) throw std::invalid_argument("emd: dimension mismatch");

    std::vector<double> cost(static_cast<size_t>(n) * n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0;
            const double* a = samples_a[i].data();
            const double* b = samples_b[j].data();
            for (size_t k = 0; k < dim; ++k) {
                const double d = a[k] - b[k];
                s += d * d;
            }
            cost[static_cast<size_t>(i) * n + j] = std::sqrt(s);
        }
    }

    const std::vector<int> match = solve_assignment(cost, n);
    TransportPlan plan;
    plan.n = n;
    plan.flow.assign(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> matched(n);
    for (int i = 0; i < n; ++i) {
        plan.flow[static_cast<size_t>(i) * n + match[i]] = 1.0 / n;
        matched[i] = cost[static_cast<size_t>(i) * n + match[i]];
    }
    // accumulate in sorted order so the value does not depend on which of the
    // two argument orders produced the matching
    std::sort(matched.begin(), matched.end());
    double total = 0;
    for (double d : matched) total += d;
    plan.cost = total / n;
    return {plan.cost, plan};
}

std::vector<std::vector<double>> residuals(
    const std::function<PolarImage(const PolarImage&)>& reconstruct_fn,
    const std::vector<const PolarImage*>& val_y, const AngularKernel& A) {
    std::vector<std::vector<double>> out(val_y.size());
    for (size_t i = 0; i < val_y.size(); ++i) {
        const PolarImage& y = *val_y[i];
        const PolarImage pred = angular_convolve(reconstruct_fn(y), A);
        std::vector<double> r(y.v.size());
        for (size_t k = 0; k < r.size(); ++k) r[k] = y.v[k] - pred.v[k];
        out[i] = std::move(r);
    }
    return out;
}

std::vector<std::vector<double>> residuals(const Unet& net,
                                           const std::vector<const PolarImage*>& val_y,
                                           const AngularKernel& A) {
    return residuals([&net](const PolarImage& y) { return net.apply(y); }, val_y, A);
}

void EmdTrace::add(long iter, double emd_value, std::optional<double> psnr) {
    if (!entries.empty() && iter <= entries.back().iter)
        throw std::invalid_argument("EmdTrace: iterations must be strictly increasing");
    entries.push_back({iter, emd_value, psnr});
}

void save_trace_csv(const std::filesystem::path& path, const EmdTrace& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_trace_csv: cannot open " + path.string());
    os << "iteration,emd,psnr\n";
    os.precision(17);
    for (const auto& e : trace.entries) {
        os << e.iter << "," << e.emd << ",";
        if (e.psnr) os << *e.psnr;
        os << "\n";
    }
}

EmdTrace load_trace_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_trace_csv: cannot open " + path.string());
    std::string line;
    std::getline(is, line); // header
    EmdTrace trace;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string iter_s, emd_s, psnr_s;
        std::getline(ss, iter_s, ',');
        std::getline(ss, emd_s, ',');
        std::getline(ss, psnr_s, ',');
        std::optional<double> psnr;
        if (!psnr_s.empty()) psnr = std::stod(psnr_s);
        trace.add(std::stol(iter_s), std::stod(emd_s), psnr);
    }
    return trace;
}

StoppingMonitor::StoppingMonitor(int check_every, int patience)
    : check_every_(check_every), patience_(patience) {
    if (check_every < 1 || patience < 1)
        throw std::invalid_argument("StoppingMonitor: check_every and patience must be >= 1");
}

StopDecision StoppingMonitor::observe(long iter, double value) {
    if (!seen_ || value < best_value_) {
        seen_ = true;
        best_value_ = value;
        best_iter_ = iter;
        since_best_ = 0;
    } else {
        ++since_best_; // ties do not refresh the minimum
    }
    StopDecision d;
    d.best_iter = best_iter_;
    d.best_value = best_value_;
    d.stop = since_best_ >= patience_;
    return d;
}

StopDecision stopping_monitor(const EmdTrace& trace, int check_every, int patience) {
    if (trace.entries.empty()) throw std::invalid_argument("stopping_monitor: empty trace");
    StoppingMonitor mon(check_every, patience);
    StopDecision d;
    for (const auto& e : trace.entries) {
        d = mon.observe(e.iter, e.emd);
        if (d.stop) return d;
    }
    return d;
}

} // namespace pat
