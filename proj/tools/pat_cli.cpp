// pat: simulate, invert, and reconstruct photoacoustic data with angular
// deblurring; dataset synthesis, training, and evaluation live here too.

#include "pat/io.hpp"
#include "pat/pipeline.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

using namespace pat;

namespace {

CartesianImage load_phantom(const std::string& source, uint64_t seed, int M) {
    if (source == "vessels") return synth_vessel_phantom(seed, M);
    if (source == "bump") return gaussian_bump_phantom(M, 0.2, -0.1, 0.12);
    if (source.ends_with(".patd")) {
        CartesianImage img = io::load_image(source);
        if (img.M != M)
            throw std::runtime_error("phantom file is " + std::to_string(img.M) + "x" +
                                     std::to_string(img.M) + ", expected M=" + std::to_string(M));
        return img;
    }
    return ingest_image(source, M); // png / pgm
}

// ---------------------------------------------------------------------------
// trace plot: EMD (black, left axis) and test PSNR (orange, right axis)
// ---------------------------------------------------------------------------

struct Canvas {
    int w, h;
    std::vector<unsigned char> rgb;
    Canvas(int w_, int h_) : w(w_), h(h_), rgb(static_cast<size_t>(w_) * h_ * 3, 255) {}
    void set(int x, int y, unsigned char r, unsigned char g, unsigned char b) {
        if (x < 0 || y < 0 || x >= w || y >= h) return;
        unsigned char* p = &rgb[(static_cast<size_t>(y) * w + x) * 3];
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
    void line(int x0, int y0, int x1, int y1, unsigned char r, unsigned char g, unsigned char b) {
        const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
        const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        while (true) {
            set(x0, y0, r, g, b);
            set(x0, y0 + 1, r, g, b); // 2 px thick
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }
};

void plot_trace_png(const EmdTrace& trace, const std::filesystem::path& out) {
    if (trace.entries.empty()) throw std::runtime_error("plot-trace: empty trace");
    const int W = 880, H = 560, ml = 70, mr = 70, mt = 30, mb = 50;
    Canvas cv(W, H);
    for (int x = ml; x <= W - mr; ++x) {
        cv.set(x, mt, 0, 0, 0);
        cv.set(x, H - mb, 0, 0, 0);
    }
    for (int y = mt; y <= H - mb; ++y) {
        cv.set(ml, y, 0, 0, 0);
        cv.set(W - mr, y, 220, 120, 0);
    }
    double emd_lo = 1e300, emd_hi = -1e300, ps_lo = 1e300, ps_hi = -1e300;
    long it_hi = 1;
    bool has_psnr = false;
    for (const auto& e : trace.entries) {
        emd_lo = std::min(emd_lo, e.emd);
        emd_hi = std::max(emd_hi, e.emd);
        it_hi = std::max(it_hi, e.iter);
        if (e.psnr) {
            has_psnr = true;
            ps_lo = std::min(ps_lo, *e.psnr);
            ps_hi = std::max(ps_hi, *e.psnr);
        }
    }
    if (emd_hi <= emd_lo) emd_hi = emd_lo + 1;
    if (has_psnr && ps_hi <= ps_lo) ps_hi = ps_lo + 1;
    auto px = [&](long it) {
        return ml + static_cast<int>((W - ml - mr) * static_cast<double>(it) / it_hi);
    };
    auto py_emd = [&](double v) {
        return H - mb - static_cast<int>((H - mt - mb) * (v - emd_lo) / (emd_hi - emd_lo));
    };
    auto py_ps = [&](double v) {
        return H - mb - static_cast<int>((H - mt - mb) * (v - ps_lo) / (ps_hi - ps_lo));
    };
    for (size_t i = 1; i < trace.entries.size(); ++i) {
        const auto& a = trace.entries[i - 1];
        const auto& b = trace.entries[i];
        cv.line(px(a.iter), py_emd(a.emd), px(b.iter), py_emd(b.emd), 0, 0, 0);
        if (a.psnr && b.psnr)
            cv.line(px(a.iter), py_ps(*a.psnr), px(b.iter), py_ps(*b.psnr), 220, 120, 0);
    }
    io::save_png_rgb(out, cv.rgb, W, H);
}

// merge order: dataset/default config, then --config file, then CLI flags
void add_train_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& loss_s,
                     std::string& stop_s) {
    cmd->add_option("--loss", loss_s, "nn2i | supervised | ssltv | dip");
    cmd->add_option("--lambda", cfg.lambda, "TV weight for ssltv");
    cmd->add_option("--lr", cfg.lr, "Adam learning rate");
    cmd->add_option("--batch", cfg.batch, "batch size");
    cmd->add_option("--iters", cfg.iters, "max training iterations");
    cmd->add_option("--seed", cfg.seed, "experiment seed");
    cmd->add_option("--kernel", cfg.kernel, "aperture kernel name");
    cmd->add_option("--noise", cfg.alpha, "noise level alpha");
    cmd->add_option("--stop", stop_s, "emd | psnr-oracle | fixed");
    cmd->add_option("--check-every", cfg.check_every, "stopping-check cadence (iterations)");
    cmd->add_option("--patience", cfg.patience, "checks without a new minimum before stopping");
    cmd->add_option("--levels", cfg.net.levels, "network resolution levels");
    cmd->add_option("--width", cfg.net.base_width, "network base channel width");
    cmd->add_option("--dip-record", cfg.dip_record, "train-split record a DIP run fits");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"photoacoustic simulation, inversion, and angular deblurring"};
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "forward-simulate a blurred noisy sinogram");
    std::string sim_phantom = "vessels", sim_kernel = "indicator-20", sim_out;
    int sim_M = 64;
    double sim_noise = 0.0;
    uint64_t sim_seed = 0;
    bool sim_nopad = false;
    std::string sim_png;
    sim->add_option("--phantom", sim_phantom, "vessels | bump | image/.patd file")->capture_default_str();
    sim->add_option("--M", sim_M, "grid size")->capture_default_str();
    sim->add_option("--kernel", sim_kernel, "aperture kernel")->capture_default_str();
    sim->add_option("--noise", sim_noise, "noise level alpha")->capture_default_str();
    sim->add_option("--seed", sim_seed, "phantom/noise seed")->capture_default_str();
    sim->add_option("--out", sim_out, "output sinogram (.patd)")->required();
    sim->add_flag("--no-pad", sim_nopad, "disable 2x zero padding in the wave solver");
    sim->add_option("--png", sim_png, "also write an 8-bit preview");

    // ---- invert ----
    auto* inv = app.add_subcommand("invert", "finite-time filtered backprojection");
    std::string inv_in, inv_out, inv_png;
    int inv_M = 0;
    inv->add_option("--in", inv_in, "input sinogram (.patd)")->required();
    inv->add_option("--out", inv_out, "output image (.patd)")->required();
    inv->add_option("--M", inv_M, "image grid size")->required();
    inv->add_option("--png", inv_png, "also write an 8-bit preview");

    // ---- polar ----
    auto* pol = app.add_subcommand("polar", "cartesian/polar resampling");
    std::string pol_in, pol_out, pol_dir = "to-polar";
    int pol_M = 0;
    pol->add_option("--in", pol_in)->required();
    pol->add_option("--out", pol_out)->required();
    pol->add_option("--direction", pol_dir, "to-polar | to-cartesian")->capture_default_str();
    pol->add_option("--M", pol_M, "cartesian grid size")->required();

    // ---- kernel ----
    auto* ker = app.add_subcommand("kernel", "emit a named aperture kernel to file");
    std::string ker_name = "indicator-20", ker_out;
    int ker_nphi = 201;
    ker->add_option("--name", ker_name)->capture_default_str();
    ker->add_option("--nphi", ker_nphi, "angular grid the kernel resolves against")
        ->capture_default_str();
    ker->add_option("--out", ker_out)->required();

    // ---- dataset ----
    auto* dat = app.add_subcommand("dataset", "synthesize a train/val/test dataset");
    std::string dat_out, dat_config;
    ExperimentConfig dat_cfg;
    std::string dat_loss = to_string(dat_cfg.loss), dat_stop = to_string(dat_cfg.stop);
    dat->add_option("--config", dat_config, "JSON config file");
    dat->add_option("--out", dat_out, "dataset directory")->required();
    dat->add_option("--M", dat_cfg.M);
    dat->add_option("--kernel", dat_cfg.kernel);
    dat->add_option("--noise", dat_cfg.alpha);
    dat->add_option("--seed", dat_cfg.seed);
    dat->add_option("--train", dat_cfg.n_train);
    dat->add_option("--val", dat_cfg.n_val);
    dat->add_option("--test", dat_cfg.n_test);
    dat->add_option("--source", dat_cfg.source, "synthetic-vessels | image-folder");
    dat->add_option("--folder", dat_cfg.folder, "image folder for source=image-folder");

    // ---- train ----
    auto* trn = app.add_subcommand("train", "train the polar deconvolver");
    std::string trn_data, trn_ckpt, trn_config, trn_trace;
    ExperimentConfig trn_cfg;
    std::string trn_loss, trn_stop;
    trn->add_option("--data", trn_data, "dataset directory")->required();
    trn->add_option("--config", trn_config, "JSON config file overriding the dataset config");
    trn->add_option("--ckpt-out", trn_ckpt, "checkpoint directory")->required();
    trn->add_option("--trace", trn_trace, "also write the EMD/PSNR trace CSV here");
    add_train_flags(trn, trn_cfg, trn_loss, trn_stop);

    // ---- reconstruct ----
    auto* rec = app.add_subcommand("reconstruct", "apply a trained checkpoint to a sinogram");
    std::string rec_ckpt, rec_in, rec_out, rec_png;
    bool rec_identity = false;
    rec->add_option("--ckpt", rec_ckpt, "checkpoint directory");
    rec->add_option("--in", rec_in, "input sinogram (.patd)")->required();
    rec->add_option("--out", rec_out, "output image (.patd)")->required();
    rec->add_flag("--identity", rec_identity, "skip the network (B = id)");
    rec->add_option("--M", inv_M, "grid size (identity mode)");
    rec->add_option("--png", rec_png, "also write an 8-bit preview");

    // ---- evaluate ----
    auto* ev = app.add_subcommand("evaluate", "PSNR of reconstructions against the sharp oracle");
    std::string ev_ckpt, ev_data, ev_out, ev_table;
    ev->add_option("--ckpt", ev_ckpt)->required();
    ev->add_option("--data", ev_data)->required();
    ev->add_option("--out", ev_out, "metrics CSV")->required();
    ev->add_option("--table", ev_table, "also append this run to a results-table CSV");

    // ---- plot-trace ----
    auto* plt = app.add_subcommand("plot-trace", "render the EMD/PSNR trace to a PNG");
    std::string plt_in, plt_out;
    plt->add_option("--trace", plt_in)->required();
    plt->add_option("--out", plt_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const GridSpec g = make_grid(sim_M);
            const CartesianImage x = load_phantom(sim_phantom, sim_seed, sim_M);
            const AngularKernel k = make_kernel(sim_kernel, g.n_phi);
            Sinogram s = forward_blurred(x, k, g, !sim_nopad);
            if (sim_noise > 0) {
                const double sigma = resolve_sigma(sim_noise, s);
                const Sinogram xi = sample_measurement_noise({sim_noise, sigma, sim_seed}, g);
                for (size_t i = 0; i < s.v.size(); ++i) s.v[i] += xi.v[i];
            }
            io::save_sinogram(sim_out, s, g);
            if (!sim_png.empty()) io::save_png_gray(sim_png, s.v, s.n_t, s.n_det);
            std::printf("wrote %s (%d x %d)\n", sim_out.c_str(), s.n_det, s.n_t);
        } else if (*inv) {
            const GridSpec g = make_grid(inv_M);
            const Sinogram s = io::load_sinogram(inv_in);
            const CartesianImage img = fbp_inverse(s, g);
            io::save_image(inv_out, img, g);
            if (!inv_png.empty()) io::save_image_png(inv_png, img);
            std::printf("wrote %s (%d x %d)\n", inv_out.c_str(), img.M, img.M);
        } else if (*pol) {
            const GridSpec g = make_grid(pol_M);
            if (pol_dir == "to-polar") {
                const PolarImage p = to_polar(io::load_image(pol_in), g);
                io::save_polar(pol_out, p, g);
            } else if (pol_dir == "to-cartesian") {
                const CartesianImage img = to_cartesian(io::load_polar(pol_in), g);
                io::save_image(pol_out, img, g);
            } else {
                throw std::runtime_error("polar: --direction must be to-polar or to-cartesian");
            }
            std::printf("wrote %s\n", pol_out.c_str());
        } else if (*ker) {
            const AngularKernel k = make_kernel(ker_name, ker_nphi);
            save_kernel(ker_out, k);
            std::printf("wrote %s (%d taps)\n", ker_out.c_str(), k.taps());
        } else if (*dat) {
            ExperimentConfig cfg = dat_cfg;
            if (!dat_config.empty()) {
                // CLI flags beat the file where given
                cfg = config_from_json(io::read_text(dat_config));
                if (dat->count("--M")) cfg.M = dat_cfg.M;
                if (dat->count("--kernel")) cfg.kernel = dat_cfg.kernel;
                if (dat->count("--noise")) cfg.alpha = dat_cfg.alpha;
                if (dat->count("--seed")) cfg.seed = dat_cfg.seed;
                if (dat->count("--train")) cfg.n_train = dat_cfg.n_train;
                if (dat->count("--val")) cfg.n_val = dat_cfg.n_val;
                if (dat->count("--test")) cfg.n_test = dat_cfg.n_test;
                if (dat->count("--source")) cfg.source = dat_cfg.source;
                if (dat->count("--folder")) cfg.folder = dat_cfg.folder;
            }
            const Dataset ds = build_dataset(cfg);
            save_dataset(ds, dat_out);
            std::printf("wrote %zu records to %s\n", ds.records.size(), dat_out.c_str());
        } else if (*trn) {
            Dataset ds = load_dataset(trn_data);
            ExperimentConfig cfg = ds.cfg;
            if (!trn_config.empty()) cfg = config_from_json(io::read_text(trn_config));
            ExperimentConfig flag_cfg = cfg;
            std::string loss_s = to_string(cfg.loss), stop_s = to_string(cfg.stop);
            // re-parse recorded flag values into the merged config
            if (trn->count("--lambda")) flag_cfg.lambda = trn_cfg.lambda;
            if (trn->count("--lr")) flag_cfg.lr = trn_cfg.lr;
            if (trn->count("--batch")) flag_cfg.batch = trn_cfg.batch;
            if (trn->count("--iters")) flag_cfg.iters = trn_cfg.iters;
            if (trn->count("--seed")) flag_cfg.seed = trn_cfg.seed;
            if (trn->count("--kernel")) flag_cfg.kernel = trn_cfg.kernel;
            if (trn->count("--noise")) flag_cfg.alpha = trn_cfg.alpha;
            if (trn->count("--check-every")) flag_cfg.check_every = trn_cfg.check_every;
            if (trn->count("--patience")) flag_cfg.patience = trn_cfg.patience;
            if (trn->count("--levels")) flag_cfg.net.levels = trn_cfg.net.levels;
            if (trn->count("--width")) flag_cfg.net.base_width = trn_cfg.net.base_width;
            if (trn->count("--dip-record")) flag_cfg.dip_record = trn_cfg.dip_record;
            if (trn->count("--loss")) loss_s = trn_loss;
            if (trn->count("--stop")) stop_s = trn_stop;
            flag_cfg.loss = loss_kind_from_string(loss_s);
            flag_cfg.stop = stop_rule_from_string(stop_s);
            if (flag_cfg.M != ds.cfg.M)
                throw std::runtime_error("train: config M differs from the dataset grid");
            // baselines stop by oracle PSNR unless told otherwise
            if ((flag_cfg.loss == LossKind::Ssltv || flag_cfg.loss == LossKind::Dip) &&
                !trn->count("--stop"))
                flag_cfg.stop = StopRule::PsnrOracle;
            std::printf("training %s, %zu parameters, %d train / %d val / %d test\n",
                        to_string(flag_cfg.loss).c_str(),
                        Unet(flag_cfg.net, flag_cfg.seed).param_count(), flag_cfg.n_train,
                        flag_cfg.n_val, flag_cfg.n_test);
            const TrainResult res = run_training(flag_cfg, ds);
            save_checkpoint(trn_ckpt, res.checkpoint);
            if (!trn_trace.empty()) save_trace_csv(trn_trace, res.trace);
            std::printf("stopped: %s, selected iteration %ld of %ld checks\n",
                        res.stop_reason.c_str(), res.selected_iter,
                        static_cast<long>(res.trace.entries.size()));
        } else if (*rec) {
            if (rec_identity) {
                if (inv_M <= 0) throw std::runtime_error("reconstruct --identity needs --M");
                const GridSpec g = make_grid(inv_M);
                const CartesianImage img = reconstruct(io::load_sinogram(rec_in), g, nullptr);
                io::save_image(rec_out, img, g);
                if (!rec_png.empty()) io::save_image_png(rec_png, img);
            } else {
                if (rec_ckpt.empty()) throw std::runtime_error("reconstruct needs --ckpt or --identity");
                const Checkpoint ckpt = load_checkpoint(rec_ckpt);
                const CartesianImage img = reconstruct(ckpt, io::load_sinogram(rec_in));
                io::save_image(rec_out, img, ckpt.cfg.grid());
                if (!rec_png.empty()) io::save_image_png(rec_png, img);
            }
            std::printf("wrote %s\n", rec_out.c_str());
        } else if (*ev) {
            const Checkpoint ckpt = load_checkpoint(ev_ckpt);
            const Dataset ds = load_dataset(ev_data);
            const MetricsReport rep = evaluate(ckpt, ds);
            io::write_text(ev_out, metrics_to_csv(rep));
            std::printf("mean PSNR %.2f dB (observation %.2f dB) over %zu samples\n",
                        rep.mean_recon, rep.mean_observed, rep.psnr_recon.size());
            if (!ev_table.empty()) {
                const std::vector<TableEntry> entries = {
                    {to_string(ckpt.cfg.loss), ckpt.cfg.kernel, ckpt.cfg.alpha, rep.mean_recon}};
                io::write_text(ev_table, format_results_table_csv(entries));
            }
        } else if (*plt) {
            plot_trace_png(load_trace_csv(plt_in), plt_out);
            std::printf("wrote %s\n", plt_out.c_str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
