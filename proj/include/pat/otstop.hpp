#pragma once

#include "pat/angconv.hpp"
#include "pat/grid.hpp"
#include "pat/nn.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

namespace pat {

// Transport plan between two N-sample empirical distributions with uniform
// marginals; the optimum is 1/N times a permutation matrix.
struct TransportPlan {
    int n = 0;
    std::vector<double> flow; // row-major N x N
    double cost = 0.0;

    double at(int i, int j) const { return flow[static_cast<size_t>(i) * n + j]; }
};

// Earth mover's distance between equal-count empirical distributions of
// vectors, solved exactly as a linear assignment over the Euclidean cost
// matrix.
std::pair<double, TransportPlan> emd(const std::vector<std::vector<double>>& samples_a,
                                     const std::vector<std::vector<double>>& samples_b);

// Exact minimum-cost assignment (shortest augmenting path with potentials);
// returns the column assigned to each row.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n);

// Predicted-noise vectors y - A B(y), flattened, one per validation sample.
std::vector<std::vector<double>> residuals(
    const std::function<PolarImage(const PolarImage&)>& reconstruct_fn,
    const std::vector<const PolarImage*>& val_y, const AngularKernel& A);
std::vector<std::vector<double>> residuals(const Unet& net,
                                           const std::vector<const PolarImage*>& val_y,
                                           const AngularKernel& A);

struct EmdTrace {
    struct Entry {
        long iter = 0;
        double emd = 0.0;
        std::optional<double> psnr;
    };
    std::vector<Entry> entries;

    void add(long iter, double emd_value, std::optional<double> psnr = std::nullopt);
};

void save_trace_csv(const std::filesystem::path& path, const EmdTrace& trace);
EmdTrace load_trace_csv(const std::filesystem::path& path);

struct StopDecision {
    bool stop = false;
    long best_iter = -1;
    double best_value = 0.0;
};

// Running-argmin early stopping: one observation per checkpoint; stops when
// no new strict minimum has occurred for `patience` consecutive checks.
// Ties keep the earliest minimum.
class StoppingMonitor {
  public:
    StoppingMonitor(int check_every, int patience);

    StopDecision observe(long iter, double value);
    long best_iter() const { return best_iter_; }
    double best_value() const { return best_value_; }
    int check_every() const { return check_every_; }

  private:
    int check_every_;
    int patience_;
    int since_best_ = 0;
    long best_iter_ = -1;
    double best_value_ = 0.0;
    bool seen_ = false;
};

// Replays a recorded trace through the monitor; each entry is one check.
StopDecision stopping_monitor(const EmdTrace& trace, int check_every, int patience);

} // namespace pat
