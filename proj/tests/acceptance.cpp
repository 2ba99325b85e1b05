// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// hard criterion fails.  Criterion 6 is stochastic and reports a warning
// instead of failing.

#include "pat/io.hpp"
#include "pat/pipeline.hpp"
#include "pat/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

using namespace pat;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    if (!pass) ++failures;
}

void report_soft(const char* id, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "WARN", id, detail.c_str());
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void criterion_1a() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> res;
    for (int M : {64, 128, 256}) {
        const GridSpec g = make_grid(M);
        res.push_back(left_inverse_residual(gaussian_bump_phantom(M, 0.2, -0.1, 0.12), g));
    }
    const bool decreasing = res[0] > res[1] && res[1] > res[2];
    const bool bound = res[1] <= 0.10;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "left-inverse residuals %.4f / %.4f / %.4f (M=64/128/256), M=128 bound 0.10, "
                  "%.0f s",
                  res[0], res[1], res[2], elapsed_s(t0));
    report("1a", decreasing && bound, buf);
}

void criterion_1b() {
    const int M = 128;
    const GridSpec g = make_grid(M);
    CartesianImage x = gaussian_bump_phantom(M, 0.25, -0.1, 0.12);
    const CartesianImage x2 = gaussian_bump_phantom(M, -0.2, 0.2, 0.15, 0.6);
    for (size_t i = 0; i < x.v.size(); ++i) x.v[i] += x2.v[i];
    const AngularKernel A = make_kernel("indicator-20", g.n_phi);

    const PolarImage lhs = to_polar(fbp_inverse(forward_blurred(x, A, g), g), g); // P V U C A P x
    const PolarImage rhs = angular_convolve(to_polar(x, g), A);                   // A P x
    const double err = rel_l2(lhs.v, rhs.v);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "blur commutation rel L2 %.4f (bound 0.12)", err);
    report("1b", err <= 0.12, buf);
}

void criterion_1c() {
    const AngularKernel A = make_kernel("indicator-20", 201);
    const CounterRng rng(2718, 1);
    uint64_t c = 0;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        PolarImage p(201, 16), q(201, 16);
        for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = rng.uniform(c++, -1.0, 1.0);
        for (size_t i = 0; i < q.v.size(); ++i) q.v[i] = rng.uniform(c++, -1.0, 1.0);
        const PolarImage Ap = angular_convolve(p, A);
        const PolarImage Atq = angular_convolve_adjoint(q, A);
        double lhs = 0, rhs = 0;
        for (size_t i = 0; i < p.v.size(); ++i) {
            lhs += Ap.v[i] * q.v[i];
            rhs += p.v[i] * Atq.v[i];
        }
        worst = std::max(worst, std::abs(lhs - rhs) / (l2_norm(p.v) * l2_norm(q.v)));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "adjoint identity worst %.2e over 100 pairs (bound 1e-10)",
                  worst);
    report("1c", worst <= 1e-10, buf);
}

void criterion_1d() {
    const CounterRng rng(3141, 2);
    PolarImage p(201, 32);
    for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = rng.uniform(i, -5.0, 5.0);
    const PolarImage out = angular_convolve(p, make_kernel("delta", 201));
    report("1d", out.v == p.v, "delta-kernel convolution is a bit-exact identity");
}

// 16-dimensional linear toy problem for the loss-offset identity
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const int dim = 16, n_draws = 10000, n_b = 5;
    const double sigma = 0.3;
    const CounterRng rng(1618, 3);
    uint64_t c = 0;
    auto mat = [&](double scale) {
        std::vector<double> m(dim * dim);
        for (auto& v : m) v = rng.uniform(c++, -scale, scale);
        return m;
    };
    auto matvec = [&](const std::vector<double>& m, const std::vector<double>& v) {
        std::vector<double> out(dim, 0.0);
        for (int r = 0; r < dim; ++r)
            for (int k = 0; k < dim; ++k) out[r] += m[r * dim + k] * v[k];
        return out;
    };
    const std::vector<double> A = mat(0.5);
    std::vector<std::vector<double>> Bs;
    for (int b = 0; b < n_b; ++b) Bs.push_back(mat(0.5));

    std::vector<double> offset_mean(n_b, 0.0), offset_m2(n_b, 0.0);
    double ref_mean = 0, ref_m2 = 0;
    const CounterRng draw_rng(42, 4);
    uint64_t dc = 0;
    for (int d = 0; d < n_draws; ++d) {
        std::vector<double> x(dim), xi(dim), eta(dim);
        for (int i = 0; i < dim; ++i) {
            x[i] = draw_rng.uniform(dc++, -1.0, 1.0);
            xi[i] = sigma * draw_rng.normal(dc++);
            eta[i] = sigma * draw_rng.normal(dc++);
        }
        const std::vector<double> Ax = matvec(A, x);
        std::vector<double> noisier(dim);
        for (int i = 0; i < dim; ++i) noisier[i] = Ax[i] + xi[i] + eta[i]; // y + eta
        double ref = 0;
        for (int i = 0; i < dim; ++i) ref += (eta[i] - xi[i]) * (eta[i] - xi[i]);
        const double dref = ref - ref_mean;
        ref_mean += dref / (d + 1);
        ref_m2 += dref * (ref - ref_mean);

        for (int b = 0; b < n_b; ++b) {
            const std::vector<double> ab = matvec(A, matvec(Bs[b], noisier));
            double l_nn2i = 0, l_sup = 0;
            for (int i = 0; i < dim; ++i) {
                const double target = Ax[i] + xi[i] - eta[i]; // y - eta
                l_nn2i += (ab[i] - target) * (ab[i] - target);
                l_sup += (ab[i] - Ax[i]) * (ab[i] - Ax[i]);
            }
            const double off = l_nn2i - l_sup;
            const double delta = off - offset_mean[b];
            offset_mean[b] += delta / (d + 1);
            offset_m2[b] += delta * (off - offset_mean[b]);
        }
    }
    const double ref_se = std::sqrt(ref_m2 / (n_draws - 1.0) / n_draws);
    bool ok = true;
    double worst_z = 0;
    for (int b = 0; b < n_b; ++b) {
        const double se = std::sqrt(offset_m2[b] / (n_draws - 1.0) / n_draws);
        const double z = std::abs(offset_mean[b] - ref_mean) / std::sqrt(se * se + ref_se * ref_se);
        worst_z = std::max(worst_z, z);
        if (z > 2.0) ok = false;
    }
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "loss offset equals E|eta-xi|^2 = %.4f across 5 linear maps, worst z=%.2f "
                  "(bound 2), %.0f s",
                  ref_mean, worst_z, elapsed_s(t0));
    report("2", ok, buf);
}

void criterion_3() {
    Unet net({2, 2}, 1);
    const bool size_ok = net.param_count() <= 500;
    {
        // move off the exact ReLU kinks that zero-initialized biases create
        const CounterRng jrng(11, 99);
        auto& p = net.params();
        for (size_t i = 0; i < p.size(); ++i) p[i] += jrng.uniform(i, 0.005, 0.02);
    }
    const AngularKernel A = make_custom_kernel({0.2, 0.5, 0.3}, 12);
    const CounterRng rng(5, 6);
    uint64_t c = 0;
    auto rand_polar = [&](double lo, double hi) {
        PolarImage p(12, 8);
        for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = rng.uniform(c++, lo, hi);
        return p;
    };
    const PolarImage y0 = rand_polar(-1, 1), e0 = rand_polar(-0.1, 0.1);
    const PolarImage y1 = rand_polar(-1, 1), e1 = rand_polar(-0.1, 0.1);
    const PolarImage xt = rand_polar(-1, 1), z = rand_polar(0, 1);

    auto fd_worst = [&](const std::function<LossValue()>& fn, double h) {
        const LossValue lv = fn();
        double worst = 0;
        auto& params = net.params();
        for (size_t i = 0; i < params.size(); ++i) {
            const double keep = params[i];
            params[i] = keep + h;
            const double up = fn().value;
            params[i] = keep - h;
            const double dn = fn().value;
            params[i] = keep;
            const double fd = (up - dn) / (2 * h);
            const double denom = std::max({std::abs(fd), std::abs(lv.grad[i]), 1e-6});
            worst = std::max(worst, std::abs(fd - lv.grad[i]) / denom);
        }
        return worst;
    };

    const std::vector<Nn2iSample> nb = {{&y0, &e0}, {&y1, &e1}};
    const std::vector<PairSample> sb = {{&y0, &xt}};
    const std::vector<const PolarImage*> tb = {&y0, &y1};
    const double w_nn2i = fd_worst([&]() { return loss_nn2i(net, nb, A); }, 1e-5);
    const double w_sup = fd_worst([&]() { return loss_supervised(net, sb); }, 1e-5);
    // the TV term is piecewise linear; the smaller step keeps kinks outside
    // the stencil
    const double w_tv = fd_worst([&]() { return loss_ssltv(net, tb, A, 1e-2); }, 1e-6);
    const double w_dip = fd_worst([&]() { return loss_dip(net, z, y1, A); }, 1e-5);
    const double worst = std::max({w_nn2i, w_sup, w_tv, w_dip});
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "gradient vs central differences: nn2i %.1e, supervised %.1e, ssltv %.1e, dip "
                  "%.1e on a %zu-parameter net (bound 1e-4)",
                  w_nn2i, w_sup, w_tv, w_dip, net.param_count());
    report("3", size_ok && worst <= 1e-4, buf);
}

void criterion_4() {
    const CounterRng rng(6022, 7);
    uint64_t c = 0;
    bool exact = true;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 5;
        std::vector<std::vector<double>> a(n, std::vector<double>(3)), b = a;
        for (auto& v : a)
            for (auto& x : v) x = rng.uniform(c++, -2.0, 2.0);
        for (auto& v : b)
            for (auto& x : v) x = rng.uniform(c++, -2.0, 2.0);

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = 1e300;
        do {
            double cost = 0;
            for (int i = 0; i < n; ++i) {
                double s = 0;
                for (int k = 0; k < 3; ++k)
                    s += (a[i][k] - b[perm[i]][k]) * (a[i][k] - b[perm[i]][k]);
                cost += std::sqrt(s);
            }
            best = std::min(best, cost);
        } while (std::next_permutation(perm.begin(), perm.end()));
        best /= n;
        const double fast = emd(a, b).first;
        if (std::abs(fast - best) > 1e-12 * std::max(1.0, best)) exact = false;

        // metric axioms on the same draws
        const double ab = emd(a, b).first, ba = emd(b, a).first;
        if (ab != ba) exact = false;
        if (emd(a, a).first != 0.0) exact = false;
    }
    report("4", exact, "assignment EMD equals factorial brute force (N<=6, 50 instances); "
                       "symmetry and identity hold");
}

struct SeedOutcome {
    double gain = 0;
    double spearman = 0;
    std::string metrics_csv;
};

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
        return r;
    };
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    const double mean = (static_cast<double>(n) - 1) / 2.0;
    double num = 0, da = 0, db = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (ra[i] - mean) * (rb[i] - mean);
        da += (ra[i] - mean) * (ra[i] - mean);
        db += (rb[i] - mean) * (rb[i] - mean);
    }
    return num / std::sqrt(da * db);
}

ExperimentConfig desk_config(uint64_t seed) {
    ExperimentConfig cfg;
    cfg.M = 64;
    cfg.kernel = "indicator-20";
    cfg.alpha = 0.05;
    cfg.n_train = 20;
    cfg.n_val = 5;
    cfg.n_test = 5;
    cfg.loss = LossKind::Nn2i;
    cfg.stop = StopRule::Emd;
    cfg.iters = 2000;
    cfg.check_every = 100;
    cfg.patience = 8;
    cfg.batch = 4;
    cfg.lr = 1e-3;
    cfg.net = {3, 4};
    cfg.seed = seed;
    return cfg;
}

SeedOutcome run_seed(uint64_t seed) {
    const ExperimentConfig cfg = desk_config(seed);
    const Dataset ds = build_dataset(cfg);
    const TrainResult res = run_training(cfg, ds);
    const MetricsReport rep = evaluate(res.checkpoint, ds);
    SeedOutcome out;
    out.gain = rep.mean_recon - rep.mean_observed;
    std::vector<double> emds, psnrs;
    for (const auto& e : res.trace.entries) {
        if (e.psnr) {
            emds.push_back(e.emd);
            psnrs.push_back(*e.psnr);
        }
    }
    out.spearman = emds.size() >= 3 ? spearman_rho(emds, psnrs) : 0.0;
    out.metrics_csv = metrics_to_csv(rep);
    return out;
}

void criteria_5_6_7() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SeedOutcome> outcomes;
    int gain_ok = 0, corr_ok = 0;
    std::string detail_gain = "gains(dB):", detail_corr = "spearman:";
    for (uint64_t seed = 0; seed < 5; ++seed) {
        outcomes.push_back(run_seed(seed));
        const auto& o = outcomes.back();
        char b[48];
        std::snprintf(b, sizeof(b), " %.2f", o.gain);
        detail_gain += b;
        std::snprintf(b, sizeof(b), " %.2f", o.spearman);
        detail_corr += b;
        if (o.gain >= 1.0) ++gain_ok;
        if (o.spearman <= -0.5) ++corr_ok;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%s -> %d/5 seeds gained >= 1.0 dB over the observation (need >= 4), %.0f s",
                  detail_gain.c_str(), gain_ok, elapsed_s(t0));
    report("5", gain_ok >= 4, buf);

    std::snprintf(buf, sizeof(buf), "%s -> %d/5 seeds at or below -0.5 (want >= 3)",
                  detail_corr.c_str(), corr_ok);
    report_soft("6", corr_ok >= 3, buf);

    const SeedOutcome rerun = run_seed(0);
    report("7", rerun.metrics_csv == outcomes[0].metrics_csv,
           "repeating seed 0 reproduces the metrics report byte-identically");
}

void criterion_8() {
    const ExperimentConfig cfg = paper_scale_config();
    const std::vector<TableEntry> entries = {
        {"nn2i", cfg.kernel, cfg.alpha, 0.0}}; // value supplied by a full-scale run
    const std::string csv = format_results_table_csv(entries);
    const bool header_ok =
        csv.find("indicator-10:0.02") != std::string::npos &&
        csv.find("gaussian-2:0.10") != std::string::npos && csv.find("nn2i") != std::string::npos;

    bool readme_ok = false;
    try {
        const std::string readme = io::read_text(std::string(PAT_SOURCE_DIR) + "/README.md");
        readme_ok = readme.find("31.93") != std::string::npos;
    } catch (...) {
    }
    report("8", header_ok && readme_ok,
           "paper-scale config emits the results-table CSV; 31.93 dB full-scale reference "
           "recorded in README");
}

} // namespace

int main() {
    criterion_1a();
    criterion_1b();
    criterion_1c();
    criterion_1d();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_6_7();
    criterion_8();
    std::printf("%s: %d hard criterion failure(s)\n", failures == 0 ? "RESULT PASS" : "RESULT FAIL",
                failures);
    return failures == 0 ? 0 : 1;
}
