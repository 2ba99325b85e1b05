#include "pat/pipeline.hpp"

#include "pat/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pat {

using nlohmann::json;

std::string to_string(StopRule r) {
    switch (r) {
        case StopRule::Emd: return "emd";
        case StopRule::PsnrOracle: return "psnr-oracle";
        case StopRule::Fixed: return "fixed";
    }
    return "emd";
}

StopRule stop_rule_from_string(const std::string& s) {
    if (s == "emd") return StopRule::Emd;
    if (s == "psnr-oracle") return StopRule::PsnrOracle;
    if (s == "fixed") return StopRule::Fixed;
    throw std::invalid_argument("unknown stop rule: " + s);
}

ExperimentConfig paper_scale_config() {
    ExperimentConfig cfg;
    cfg.M = 256;
    cfg.kernel = "indicator-10";
    cfg.alpha = 0.02;
    cfg.batch = 15;
    cfg.iters = 100000;
    cfg.lr = 1e-4;
    cfg.n_train = 600;
    cfg.n_val = 100;
    cfg.n_test = 100;
    cfg.net = UnetConfig{4, 16};
    return cfg;
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["m"] = c.M;
    j["kernel"] = c.kernel;
    j["alpha"] = c.alpha;
    j["loss"] = to_string(c.loss);
    j["lambda"] = c.lambda;
    j["lr"] = c.lr;
    j["batch"] = c.batch;
    j["iters"] = c.iters;
    j["seed"] = c.seed;
    j["stop"] = to_string(c.stop);
    j["check_every"] = c.check_every;
    j["patience"] = c.patience;
    j["net_levels"] = c.net.levels;
    j["net_base_width"] = c.net.base_width;
    j["source"] = c.source;
    j["folder"] = c.folder;
    j["n_train"] = c.n_train;
    j["n_val"] = c.n_val;
    j["n_test"] = c.n_test;
    j["zero_pad"] = c.zero_pad;
    j["sigma_from_noisy"] = c.sigma_from_noisy;
    j["eta_fixed"] = c.eta_fixed;
    j["track_test_psnr"] = c.track_test_psnr;
    j["dip_record"] = c.dip_record;
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig c;
    c.M = j.value("m", c.M);
    c.kernel = j.value("kernel", c.kernel);
    c.alpha = j.value("alpha", c.alpha);
    c.loss = loss_kind_from_string(j.value("loss", to_string(c.loss)));
    c.lambda = j.value("lambda", c.lambda);
    c.lr = j.value("lr", c.lr);
    c.batch = j.value("batch", c.batch);
    c.iters = j.value("iters", c.iters);
    c.seed = j.value("seed", c.seed);
    c.stop = stop_rule_from_string(j.value("stop", to_string(c.stop)));
    c.check_every = j.value("check_every", c.check_every);
    c.patience = j.value("patience", c.patience);
    c.net.levels = j.value("net_levels", c.net.levels);
    c.net.base_width = j.value("net_base_width", c.net.base_width);
    c.source = j.value("source", c.source);
    c.folder = j.value("folder", c.folder);
    c.n_train = j.value("n_train", c.n_train);
    c.n_val = j.value("n_val", c.n_val);
    c.n_test = j.value("n_test", c.n_test);
    c.zero_pad = j.value("zero_pad", c.zero_pad);
    c.sigma_from_noisy = j.value("sigma_from_noisy", c.sigma_from_noisy);
    c.eta_fixed = j.value("eta_fixed", c.eta_fixed);
    c.track_test_psnr = j.value("track_test_psnr", c.track_test_psnr);
    c.dip_record = j.value("dip_record", c.dip_record);
    if (c.n_train <= 0 || c.n_val <= 0 || c.n_test <= 0)
        throw std::invalid_argument("config: split sizes must be positive");
    return c;
}

// ---------------------------------------------------------------------------
// phantoms
// ---------------------------------------------------------------------------

CartesianImage gaussian_bump_phantom(int M, double cx, double cy, double sigma, double amp) {
    CartesianImage img(M);
    for (int iy = 0; iy < M; ++iy) {
        const double y = pixel_center(iy, M);
        for (int ix = 0; ix < M; ++ix) {
            const double x = pixel_center(ix, M);
            const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            img.at(ix, iy) += amp * std::exp(-d2 / (2 * sigma * sigma));
        }
    }
    return img;
}

namespace {

struct Stroke {
    double x, y, ang;
    int steps;
    double width_px;
    double val;
    int depth;
};

void stamp(CartesianImage& img, double cx, double cy, double rad, double val) {
    const int M = img.M;
    const double h = 2.0 / M;
    const int i0 = std::max(0, static_cast<int>((cx - rad + 1) / h) - 1);
    const int i1 = std::min(M - 1, static_cast<int>((cx + rad + 1) / h) + 1);
    const int j0 = std::max(0, static_cast<int>((cy - rad + 1) / h) - 1);
    const int j1 = std::min(M - 1, static_cast<int>((cy + rad + 1) / h) + 1);
    for (int jy = j0; jy <= j1; ++jy) {
        const double py = pixel_center(jy, M);
        for (int jx = i0; jx <= i1; ++jx) {
            const double px = pixel_center(jx, M);
            const double d = std::hypot(px - cx, py - cy);
            // half-pixel soft edge
            const double cov = std::clamp((rad - d) / h + 0.5, 0.0, 1.0);
            if (cov > 0) img.at(jx, jy) = std::max(img.at(jx, jy), val * cov);
        }
    }
}

} // namespace

CartesianImage synth_vessel_phantom(uint64_t seed, int M) {
    CartesianImage img(M);
    const CounterRng rng(seed, static_cast<uint64_t>(SeedStream::Dataset));
    uint64_t ctr = 0;
    auto u = [&]() { return rng.uniform(ctr++, 0.0, 1.0); };
    auto gauss = [&]() {
        const double a = rng.uniform(ctr++);
        const double b = rng.uniform(ctr++, 0.0, 1.0);
        return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * b);
    };

    const int n_vessels = 3 + static_cast<int>(u() * 6.0); // 3..8
    std::vector<Stroke> stack;
    for (int v = 0; v < n_vessels; ++v) {
        const double s = 0.55 * std::sqrt(u());
        const double th = u() * 2 * M_PI;
        stack.push_back({s * std::cos(th), s * std::sin(th), u() * 2 * M_PI,
                         45 + static_cast<int>(u() * 65), 1.0 + u() * 3.0, 0.55 + 0.45 * u(), 0});
    }
    int emitted = 0;
    const double step = 0.012;
    while (!stack.empty() && emitted < 64) {
        Stroke s = stack.back();
        stack.pop_back();
        ++emitted;
        for (int i = 0; i < s.steps; ++i) {
            stamp(img, s.x, s.y, s.width_px / M, s.val);
            s.ang += 0.22 * gauss();
            s.x += step * std::cos(s.ang);
            s.y += step * std::sin(s.ang);
            if (std::hypot(s.x, s.y) > 0.82) break;
            const int remaining = s.steps - i;
            if (s.depth < 3 && remaining > 24 && u() < 0.02) {
                const double split = (u() < 0.5 ? 1.0 : -1.0) * (0.35 + 0.75 * u());
                stack.push_back({s.x, s.y, s.ang + split, remaining / 2,
                                 std::max(1.0, s.width_px * 0.75), s.val, s.depth + 1});
            }
        }
    }
    // hard support guarantee
    for (int iy = 0; iy < M; ++iy) {
        const double y = pixel_center(iy, M);
        for (int ix = 0; ix < M; ++ix) {
            const double x = pixel_center(ix, M);
            if (x * x + y * y > 0.9 * 0.9) img.at(ix, iy) = 0.0;
            img.at(ix, iy) = std::clamp(img.at(ix, iy), 0.0, 1.0);
        }
    }
    return img;
}

CartesianImage ingest_image(const std::filesystem::path& path, int M) {
    const io::GrayImage src = io::load_gray_image(path);
    CartesianImage out(M);
    // bilinear resize to M x M on pixel centers, then mask to the disc
    for (int iy = 0; iy < M; ++iy) {
        for (int ix = 0; ix < M; ++ix) {
            const double sx = (ix + 0.5) / M * src.width - 0.5;
            const double sy = (iy + 0.5) / M * src.height - 0.5;
            const double cx = std::clamp(sx, 0.0, static_cast<double>(src.width - 1));
            const double cy = std::clamp(sy, 0.0, static_cast<double>(src.height - 1));
            const int x0 = std::min(static_cast<int>(cx), src.width - 2);
            const int y0 = std::min(static_cast<int>(cy), src.height - 2);
            const double fx = cx - x0, fy = cy - y0;
            auto at = [&](int xx, int yy) { return src.v[static_cast<size_t>(yy) * src.width + xx]; };
            double val = (1 - fx) * (1 - fy) * at(x0, y0) + fx * (1 - fy) * at(x0 + 1, y0) +
                         (1 - fx) * fy * at(x0, y0 + 1) + fx * fy * at(x0 + 1, y0 + 1);
            const double px = pixel_center(ix, M), py = pixel_center(iy, M);
            if (px * px + py * py > 0.9 * 0.9) val = 0.0;
            out.at(ix, iy) = std::clamp(val, 0.0, 1.0);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// dataset
// ---------------------------------------------------------------------------

namespace {

// noise-draw slots per record
constexpr uint64_t kXiSlot = 0;
constexpr uint64_t kEtaSlot = 1;
constexpr uint64_t kEmdRefSlot = 2;

Sinogram blurred_forward(WaveSolver& solver, const CartesianImage& x, const AngularKernel& A,
                         const GridSpec& g) {
    if (A.is_delta()) return solver.forward(x);
    return solver.forward(to_cartesian(angular_convolve(to_polar(x, g), A), g));
}

std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        auto ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".pgm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace

Dataset build_dataset(const ExperimentConfig& cfg) {
    const GridSpec g = cfg.grid();
    const AngularKernel A = make_kernel(cfg.kernel, g.n_phi);
    WaveSolver solver(g, cfg.zero_pad);

    std::vector<std::filesystem::path> files;
    if (cfg.source == "image-folder") {
        files = list_image_files(cfg.folder);
        if (static_cast<int>(files.size()) < cfg.count())
            throw std::runtime_error("build_dataset: folder has " + std::to_string(files.size()) +
                                     " images, need " + std::to_string(cfg.count()));
    } else if (cfg.source != "synthetic-vessels") {
        throw std::invalid_argument("build_dataset: unknown source " + cfg.source);
    }

    Dataset ds;
    ds.cfg = cfg;
    ds.records.reserve(cfg.count());
    for (int id = 0; id < cfg.count(); ++id) {
        DatasetRecord rec;
        rec.id = id;
        rec.seed = derive_seed(cfg.seed, static_cast<uint64_t>(id));
        rec.x = cfg.source == "image-folder" ? ingest_image(files[id], cfg.M)
                                             : synth_vessel_phantom(rec.seed, cfg.M);
        rec.x_p = to_polar(rec.x, g);
        rec.clean = blurred_forward(solver, rec.x, A, g);
        rec.sigma = resolve_sigma(cfg.alpha, rec.clean);
        const Sinogram xi = sample_measurement_noise(
            {cfg.alpha, rec.sigma, derive_seed(rec.seed, kXiSlot, 0)}, g);
        rec.y = rec.clean;
        for (size_t i = 0; i < rec.y.v.size(); ++i) rec.y.v[i] += xi.v[i];
        rec.y_p = to_polar(fbp_inverse(rec.y, g), g);
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

PolarImage sample_eta(const DatasetRecord& rec, const ExperimentConfig& cfg, uint64_t draw) {
    const GridSpec g = cfg.grid();
    double sigma = rec.sigma;
    if (cfg.sigma_from_noisy) {
        double peak = 0;
        for (double v : rec.y.v) peak = std::max(peak, std::abs(v));
        sigma = cfg.alpha * peak;
    }
    return sample_polar_noise({cfg.alpha, sigma, derive_seed(rec.seed, kEtaSlot, draw)}, g);
}

PolarImage sample_emd_reference(const DatasetRecord& rec, const ExperimentConfig& cfg) {
    const GridSpec g = cfg.grid();
    return sample_polar_noise({cfg.alpha, rec.sigma, derive_seed(rec.seed, kEmdRefSlot, 0)}, g);
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "records");
    json meta;
    meta["config"] = json::parse(config_to_json(ds.cfg));
    meta["count"] = ds.records.size();
    io::write_text(dir / "meta.json", meta.dump(2) + "\n");
    const GridSpec g = ds.cfg.grid();
    for (const auto& rec : ds.records) {
        char name[16];
        std::snprintf(name, sizeof(name), "%04d", rec.id);
        const fs::path rdir = dir / "records" / name;
        fs::create_directories(rdir);
        io::save_image(rdir / "x.patd", rec.x, g);
        io::save_polar(rdir / "xp.patd", rec.x_p, g);
        io::save_sinogram(rdir / "clean.patd", rec.clean, g);
        io::save_sinogram(rdir / "y.patd", rec.y, g);
        io::save_polar(rdir / "yp.patd", rec.y_p, g);
        json rj;
        rj["id"] = rec.id;
        rj["seed"] = rec.seed;
        rj["sigma"] = rec.sigma;
        io::write_text(rdir / "meta.json", rj.dump(2) + "\n");
    }
}

Dataset load_dataset(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const json meta = json::parse(io::read_text(dir / "meta.json"));
    Dataset ds;
    ds.cfg = config_from_json(meta.at("config").dump());
    const int count = meta.at("count").get<int>();
    ds.records.reserve(count);
    for (int id = 0; id < count; ++id) {
        char name[16];
        std::snprintf(name, sizeof(name), "%04d", id);
        const fs::path rdir = dir / "records" / name;
        const json rj = json::parse(io::read_text(rdir / "meta.json"));
        DatasetRecord rec;
        rec.id = rj.at("id").get<int>();
        rec.seed = rj.at("seed").get<uint64_t>();
        rec.sigma = rj.at("sigma").get<double>();
        rec.x = io::load_image(rdir / "x.patd");
        rec.x_p = io::load_polar(rdir / "xp.patd");
        rec.clean = io::load_sinogram(rdir / "clean.patd");
        rec.y = io::load_sinogram(rdir / "y.patd");
        rec.y_p = io::load_polar(rdir / "yp.patd");
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

// ---------------------------------------------------------------------------
// checkpoint
// ---------------------------------------------------------------------------

Unet Checkpoint::make_net() const {
    Unet net(net_cfg, /*seed=*/0);
    if (net.param_count() != params.size())
        throw std::runtime_error("Checkpoint: parameter count mismatch");
    net.params() = params;
    return net;
}

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    json m;
    m["net_levels"] = ckpt.net_cfg.levels;
    m["net_base_width"] = ckpt.net_cfg.base_width;
    m["step"] = ckpt.step;
    m["selected_iter"] = ckpt.selected_iter;
    m["adam_step"] = ckpt.adam.step;
    m["lr"] = ckpt.adam.cfg.lr;
    m["config"] = json::parse(config_to_json(ckpt.cfg));
    m["has_dip_z"] = ckpt.dip_z.has_value();
    io::write_text(dir / "manifest.json", m.dump(2) + "\n");
    io::save_array(dir / "params.patd", {{ckpt.params.size()}, ckpt.params});
    io::save_array(dir / "adam_m.patd", {{ckpt.adam.m.size()}, ckpt.adam.m});
    io::save_array(dir / "adam_v.patd", {{ckpt.adam.v.size()}, ckpt.adam.v});
    save_trace_csv(dir / "trace.csv", ckpt.trace);
    if (ckpt.dip_z) {
        io::save_polar(dir / "dip_z.patd", *ckpt.dip_z, ckpt.cfg.grid());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
    const json m = json::parse(io::read_text(dir / "manifest.json"));
    Checkpoint ckpt;
    ckpt.net_cfg.levels = m.at("net_levels").get<int>();
    ckpt.net_cfg.base_width = m.at("net_base_width").get<int>();
    ckpt.step = m.at("step").get<long>();
    ckpt.selected_iter = m.at("selected_iter").get<long>();
    ckpt.cfg = config_from_json(m.at("config").dump());
    ckpt.params = io::load_array(dir / "params.patd").v;
    ckpt.adam = make_adam(ckpt.params.size(), {ckpt.cfg.lr});
    ckpt.adam.m = io::load_array(dir / "adam_m.patd").v;
    ckpt.adam.v = io::load_array(dir / "adam_v.patd").v;
    ckpt.adam.step = m.at("adam_step").get<long>();
    ckpt.trace = load_trace_csv(dir / "trace.csv");
    if (m.value("has_dip_z", false)) {
        ckpt.dip_z = io::load_polar(dir / "dip_z.patd");
    }
    return ckpt;
}

// ---------------------------------------------------------------------------
// training
// ---------------------------------------------------------------------------

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

} // namespace

TrainResult run_training(const ExperimentConfig& cfg, const Dataset& ds) {
    if (static_cast<int>(ds.records.size()) < cfg.count())
        throw std::invalid_argument("run_training: dataset smaller than configured splits");
    const GridSpec g = cfg.grid();
    const AngularKernel A = make_kernel(cfg.kernel, g.n_phi);

    Unet net(cfg.net, cfg.seed);
    AdamState adam = make_adam(net.param_count(), AdamConfig{cfg.lr, 0.9, 0.999, 1e-8});

    const bool is_dip = cfg.loss == LossKind::Dip;
    const DatasetRecord* dip_rec = nullptr;
    PolarImage dip_z;
    if (is_dip) {
        if (cfg.dip_record < 0 || cfg.dip_record >= cfg.n_train)
            throw std::invalid_argument("run_training: dip_record outside the train split");
        dip_rec = &ds.train(cfg.dip_record);
        dip_z = PolarImage(g.n_phi, g.n_r);
        const CounterRng zrng(cfg.seed, static_cast<uint64_t>(SeedStream::DipInput));
        for (size_t i = 0; i < dip_z.v.size(); ++i) dip_z.v[i] = zrng.uniform(i, 0.0, 1.0);
    }

    // fixed extra-noise draws, one per training record
    std::vector<PolarImage> etas;
    if (cfg.loss == LossKind::Nn2i && cfg.eta_fixed) {
        etas.resize(cfg.n_train);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < cfg.n_train; ++i) etas[i] = sample_eta(ds.train(i), cfg, 0);
    }

    // validation-side fixtures for the stopping rule
    std::vector<const PolarImage*> val_y;
    std::vector<std::vector<double>> xi_ref;
    std::vector<CartesianImage> val_oracle, test_oracle;
    const bool need_val_psnr = cfg.stop == StopRule::PsnrOracle;
    {
        WaveSolver solver(g, cfg.zero_pad);
        if (!is_dip) {
            for (int i = 0; i < cfg.n_val; ++i) val_y.push_back(&ds.val(i).y_p);
            xi_ref.resize(cfg.n_val);
            for (int i = 0; i < cfg.n_val; ++i) xi_ref[i] = sample_emd_reference(ds.val(i), cfg).v;
            if (need_val_psnr)
                for (int i = 0; i < cfg.n_val; ++i)
                    val_oracle.push_back(fbp_inverse(solver.forward(ds.val(i).x), g));
        } else {
            val_y.push_back(&dip_rec->y_p);
            xi_ref.push_back(sample_emd_reference(*dip_rec, cfg).v);
            val_oracle.push_back(fbp_inverse(solver.forward(dip_rec->x), g));
        }
        if (cfg.track_test_psnr && !is_dip)
            for (int i = 0; i < cfg.n_test; ++i)
                test_oracle.push_back(fbp_inverse(solver.forward(ds.test(i).x), g));
    }

    // one evaluation of the stopping metrics at a checkpoint
    auto eval_checkpoint = [&](double& emd_out, double& stop_metric,
                               std::optional<double>& psnr_out) {
        std::vector<std::vector<double>> res;
        if (is_dip) {
            const PolarImage pred = angular_convolve(net.apply(dip_z), A);
            std::vector<double> r(dip_rec->y_p.v.size());
            for (size_t k = 0; k < r.size(); ++k) r[k] = dip_rec->y_p.v[k] - pred.v[k];
            res.push_back(std::move(r));
        } else {
            res = residuals(net, val_y, A);
        }
        emd_out = emd(xi_ref, res).first;

        double val_psnr = 0;
        if (need_val_psnr) {
            if (is_dip) {
                val_psnr = psnr(to_cartesian(net.apply(dip_z), g), val_oracle[0]);
            } else {
                std::vector<double> ps(cfg.n_val);
                for (int i = 0; i < cfg.n_val; ++i)
                    ps[i] = psnr(to_cartesian(net.apply(ds.val(i).y_p), g), val_oracle[i]);
                val_psnr = mean_of(ps);
            }
        }
        stop_metric = cfg.stop == StopRule::PsnrOracle ? -val_psnr : emd_out;

        psnr_out.reset();
        if (cfg.track_test_psnr && !is_dip) {
            std::vector<double> ps(cfg.n_test);
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < cfg.n_test; ++i)
                ps[i] = psnr(to_cartesian(net.apply(ds.test(i).y_p), g), test_oracle[i]);
            psnr_out = mean_of(ps);
        } else if (is_dip) {
            psnr_out = psnr(to_cartesian(net.apply(dip_z), g), val_oracle[0]);
        }
    };

    TrainResult result;
    StoppingMonitor monitor(cfg.check_every, cfg.patience);
    std::vector<double> best_params = net.params();
    long best_iter = 0;

    auto checkpoint_at = [&](long it) -> bool {
        double emd_v = 0, metric = 0;
        std::optional<double> test_psnr;
        eval_checkpoint(emd_v, metric, test_psnr);
        result.trace.add(it, emd_v, test_psnr);
        if (cfg.stop == StopRule::Fixed) return false;
        const StopDecision d = monitor.observe(it, metric);
        if (d.best_iter == it) {
            best_params = net.params();
            best_iter = it;
        }
        return d.stop;
    };

    const CounterRng batch_rng(cfg.seed, static_cast<uint64_t>(SeedStream::Batch));
    result.stop_reason = "max-iters";
    bool stopped = checkpoint_at(0) && cfg.iters > 0;
    if (stopped) result.stop_reason = "early-stop";

    for (long it = 1; it <= cfg.iters && !stopped; ++it) {
        LossValue lv;
        try {
            switch (cfg.loss) {
                case LossKind::Nn2i: {
                    std::vector<PolarImage> batch_eta;
                    std::vector<Nn2iSample> batch(cfg.batch);
                    if (!cfg.eta_fixed) batch_eta.resize(cfg.batch);
                    std::vector<int> idx(cfg.batch);
                    for (int b = 0; b < cfg.batch; ++b)
                        idx[b] = static_cast<int>(batch_rng.below(
                            static_cast<uint64_t>(it) * cfg.batch + b, cfg.n_train));
                    if (!cfg.eta_fixed) {
#pragma omp parallel for schedule(dynamic)
                        for (int b = 0; b < cfg.batch; ++b)
                            batch_eta[b] =
                                sample_eta(ds.train(idx[b]), cfg, static_cast<uint64_t>(it));
                    }
                    for (int b = 0; b < cfg.batch; ++b) {
                        batch[b].y_p = &ds.train(idx[b]).y_p;
                        batch[b].eta_p = cfg.eta_fixed ? &etas[idx[b]] : &batch_eta[b];
                    }
                    lv = loss_nn2i(net, batch, A);
                    break;
                }
                case LossKind::Supervised: {
                    std::vector<PairSample> batch(cfg.batch);
                    for (int b = 0; b < cfg.batch; ++b) {
                        const auto& rec = ds.train(static_cast<int>(batch_rng.below(
                            static_cast<uint64_t>(it) * cfg.batch + b, cfg.n_train)));
                        batch[b] = {&rec.y_p, &rec.x_p};
                    }
                    lv = loss_supervised(net, batch);
                    break;
                }
                case LossKind::Ssltv: {
                    std::vector<const PolarImage*> batch(cfg.batch);
                    for (int b = 0; b < cfg.batch; ++b)
                        batch[b] = &ds.train(static_cast<int>(batch_rng.below(
                                                 static_cast<uint64_t>(it) * cfg.batch + b,
                                                 cfg.n_train)))
                                        .y_p;
                    lv = loss_ssltv(net, batch, A, cfg.lambda);
                    break;
                }
                case LossKind::Dip:
                    lv = loss_dip(net, dip_z, dip_rec->y_p, A);
                    break;
            }
            if (!std::isfinite(lv.value)) throw std::runtime_error("non-finite loss");
            adam_step(adam, net.params(), lv.grad);
        } catch (const std::runtime_error& e) {
            result.stop_reason = std::string("divergence: ") + e.what();
            break;
        }
        if (it % cfg.check_every == 0 || it == cfg.iters) {
            if (checkpoint_at(it)) {
                result.stop_reason = "early-stop";
                stopped = true;
            }
        }
    }

    if (cfg.stop == StopRule::Fixed) {
        best_params = net.params();
        best_iter = result.trace.entries.empty() ? 0 : result.trace.entries.back().iter;
    }

    result.selected_iter = best_iter;
    Checkpoint& ckpt = result.checkpoint;
    ckpt.net_cfg = cfg.net;
    ckpt.params = best_params;
    ckpt.adam = std::move(adam);
    ckpt.step = result.trace.entries.empty() ? 0 : result.trace.entries.back().iter;
    ckpt.selected_iter = best_iter;
    ckpt.trace = result.trace;
    ckpt.cfg = cfg;
    if (is_dip) ckpt.dip_z = dip_z;
    return result;
}

// ---------------------------------------------------------------------------
// reconstruction and metrics
// ---------------------------------------------------------------------------

CartesianImage reconstruct(const Sinogram& g, const GridSpec& spec, const Unet* net,
                           bool zero_pad) {
    (void)zero_pad; // the inverse path does not run the wave solver
    const PolarImage y_p = to_polar(fbp_inverse(g, spec), spec);
    if (!net) return to_cartesian(y_p, spec);
    return to_cartesian(net->apply(y_p), spec);
}

CartesianImage reconstruct(const Checkpoint& ckpt, const Sinogram& g) {
    const GridSpec spec = ckpt.cfg.grid();
    const Unet net = ckpt.make_net();
    if (ckpt.dip_z) {
        // DIP reconstructs from its fixed input image
        return to_cartesian(net.apply(*ckpt.dip_z), spec);
    }
    return reconstruct(g, spec, &net, ckpt.cfg.zero_pad);
}

CartesianImage sharp_oracle(const CartesianImage& x, const GridSpec& spec, bool zero_pad) {
    return fbp_inverse(forward(x, spec, zero_pad), spec);
}

double psnr(const CartesianImage& recon, const CartesianImage& oracle) {
    if (recon.M != oracle.M) throw std::invalid_argument("psnr: size mismatch");
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : oracle.v) peak = std::max(peak, v);
    double mse = 0;
    for (size_t i = 0; i < recon.v.size(); ++i) {
        const double d = recon.v[i] - oracle.v[i];
        mse += d * d;
    }
    mse /= static_cast<double>(recon.v.size());
    if (mse == 0.0) return 99.0;
    return std::min(99.0, 10.0 * std::log10(peak * peak / mse));
}

MetricsReport evaluate(const Checkpoint& ckpt, const Dataset& ds) {
    const ExperimentConfig& cfg = ds.cfg;
    const GridSpec g = cfg.grid();
    const Unet net = ckpt.make_net();
    MetricsReport rep;
    WaveSolver solver(g, cfg.zero_pad);
    if (ckpt.dip_z) {
        // DIP fits a single record; score that record only
        const DatasetRecord& rec = ds.train(ckpt.cfg.dip_record);
        const CartesianImage oracle = fbp_inverse(solver.forward(rec.x), g);
        rep.psnr_recon.push_back(psnr(to_cartesian(net.apply(*ckpt.dip_z), g), oracle));
        rep.psnr_observed.push_back(psnr(fbp_inverse(rec.y, g), oracle));
        rep.mean_recon = rep.psnr_recon[0];
        rep.mean_observed = rep.psnr_observed[0];
        return rep;
    }
    rep.psnr_recon.resize(cfg.n_test);
    rep.psnr_observed.resize(cfg.n_test);
    for (int i = 0; i < cfg.n_test; ++i) {
        const DatasetRecord& rec = ds.test(i);
        const CartesianImage oracle = fbp_inverse(solver.forward(rec.x), g);
        const CartesianImage observed = fbp_inverse(rec.y, g);
        const CartesianImage recon = reconstruct(rec.y, g, &net, cfg.zero_pad);
        rep.psnr_recon[i] = psnr(recon, oracle);
        rep.psnr_observed[i] = psnr(observed, oracle);
    }
    rep.mean_recon = mean_of(rep.psnr_recon);
    rep.mean_observed = mean_of(rep.psnr_observed);
    double var = 0;
    for (double p : rep.psnr_recon) var += (p - rep.mean_recon) * (p - rep.mean_recon);
    rep.std_recon = rep.psnr_recon.size() > 1
                        ? std::sqrt(var / (static_cast<double>(rep.psnr_recon.size()) - 1))
                        : 0.0;
    return rep;
}

std::string metrics_to_csv(const MetricsReport& rep) {
    std::string out = "sample,psnr_recon,psnr_observed\n";
    char buf[96];
    for (size_t i = 0; i < rep.psnr_recon.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f\n", i, rep.psnr_recon[i],
                      rep.psnr_observed[i]);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "mean,%.6f,%.6f\n", rep.mean_recon, rep.mean_observed);
    out += buf;
    std::snprintf(buf, sizeof(buf), "std,%.6f,\n", rep.std_recon);
    out += buf;
    return out;
}

std::string format_results_table_csv(const std::vector<TableEntry>& entries) {
    const std::vector<std::string> kernels = {"indicator-10", "indicator-20", "gaussian-1",
                                              "gaussian-2"};
    const std::vector<double> alphas = {0.02, 0.05, 0.10};
    std::string out = "method";
    for (const auto& k : kernels)
        for (double a : alphas) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), ",%s:%.2f", k.c_str(), a);
            out += buf;
        }
    out += "\n";
    std::vector<std::string> methods;
    for (const auto& e : entries)
        if (std::find(methods.begin(), methods.end(), e.method) == methods.end())
            methods.push_back(e.method);
    for (const auto& m : methods) {
        out += m;
        for (const auto& k : kernels)
            for (double a : alphas) {
                out += ",";
                for (const auto& e : entries) {
                    if (e.method == m && e.kernel == k && std::abs(e.alpha - a) < 1e-9) {
                        char buf[32];
                        std::snprintf(buf, sizeof(buf), "%.2f", e.psnr);
                        out += buf;
                        break;
                    }
                }
            }
        out += "\n";
    }
    return out;
}

} // namespace pat
