#pragma once

#include "pat/angconv.hpp"
#include "pat/fbp.hpp"
#include "pat/grid.hpp"
#include "pat/nn.hpp"
#include "pat/noise.hpp"
#include "pat/otstop.hpp"
#include "pat/polar.hpp"
#include "pat/wavesim.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pat {

enum class StopRule { Emd, PsnrOracle, Fixed };
std::string to_string(StopRule r);
StopRule stop_rule_from_string(const std::string& s);

struct ExperimentConfig {
    int M = 64;
    std::string kernel = "indicator-20";
    double alpha = 0.05;

    LossKind loss = LossKind::Nn2i;
    double lambda = 1e-2; // ssltv regularization weight
    double lr = 1e-4;
    int batch = 15;
    long iters = 2000;
    uint64_t seed = 0;

    StopRule stop = StopRule::Emd;
    int check_every = 200;
    int patience = 5;

    UnetConfig net;

    std::string source = "synthetic-vessels"; // or "image-folder"
    std::string folder;                       // image-folder path
    int n_train = 20, n_val = 5, n_test = 5;

    bool zero_pad = true;         // 2x zero padding in the wave solver
    bool sigma_from_noisy = true; // extra-noise sigma from the noisy sinogram max
    bool eta_fixed = true;        // one extra-noise draw per record (vs per iteration)
    bool track_test_psnr = true;  // record test PSNR alongside the EMD trace
    int dip_record = 0;           // train-split record a DIP run fits

    GridSpec grid() const { return make_grid(M); }
    int count() const { return n_train + n_val + n_test; }
};

// Full-scale replication preset: M=256, 600/100/100 split, batch 15,
// 1e5 iterations, lr 1e-4.
ExperimentConfig paper_scale_config();

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// phantoms and ingestion
// ---------------------------------------------------------------------------

// Procedural branching-vessel phantom: random smooth branching polylines,
// widths 1-4 px, values in [0,1], supported inside radius 0.9; deterministic
// per seed.
CartesianImage synth_vessel_phantom(uint64_t seed, int M);

CartesianImage gaussian_bump_phantom(int M, double cx, double cy, double sigma,
                                     double amp = 1.0);

// Grayscale image file -> M x M, values [0,1], masked to the 0.9 disc.
CartesianImage ingest_image(const std::filesystem::path& path, int M);

// ---------------------------------------------------------------------------
// dataset
// ---------------------------------------------------------------------------

struct DatasetRecord {
    int id = 0;
    uint64_t seed = 0; // noise draws derive from this
    double sigma = 0.0;
    CartesianImage x;
    PolarImage x_p;
    Sinogram clean; // U C A P x
    Sinogram y;     // clean + measurement noise
    PolarImage y_p; // P V y
};

struct Dataset {
    ExperimentConfig cfg;
    std::vector<DatasetRecord> records;

    const DatasetRecord& train(int i) const { return records.at(i); }
    const DatasetRecord& val(int i) const { return records.at(cfg.n_train + i); }
    const DatasetRecord& test(int i) const { return records.at(cfg.n_train + cfg.n_val + i); }
};

Dataset build_dataset(const ExperimentConfig& cfg);
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

// The extra-noise draw for one record: fresh measurement-domain white noise
// with the record's noise level pushed through P o V.
PolarImage sample_eta(const DatasetRecord& rec, const ExperimentConfig& cfg, uint64_t draw);

// The EMD reference noise sample for one record (deterministic per record).
PolarImage sample_emd_reference(const DatasetRecord& rec, const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// training
// ---------------------------------------------------------------------------

struct Checkpoint {
    UnetConfig net_cfg;
    std::vector<double> params;
    AdamState adam;
    long step = 0;          // iterations taken when this snapshot was made
    long selected_iter = -1;
    EmdTrace trace;
    ExperimentConfig cfg;
    std::optional<PolarImage> dip_z;

    Unet make_net() const;
};

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& dir);

struct TrainResult {
    Checkpoint checkpoint; // weights of the selected iterate
    EmdTrace trace;
    long selected_iter = -1;
    std::string stop_reason;
};

TrainResult run_training(const ExperimentConfig& cfg, const Dataset& ds);

// ---------------------------------------------------------------------------
// reconstruction and metrics
// ---------------------------------------------------------------------------

// Algorithm steps: y <- V g; y_P <- P y; x_P <- B(y_P); x <- C x_P.
// A null net means the identity stub B = id.
CartesianImage reconstruct(const Sinogram& g, const GridSpec& spec, const Unet* net,
                           bool zero_pad = true);
CartesianImage reconstruct(const Checkpoint& ckpt, const Sinogram& g);

// The sharp oracle V(U(x)) reconstructions are compared against.
CartesianImage sharp_oracle(const CartesianImage& x, const GridSpec& spec, bool zero_pad = true);

// 10*log10(peak^2/MSE) with peak = max of the oracle image; equal images
// report the 99 dB sentinel.
double psnr(const CartesianImage& recon, const CartesianImage& oracle);

struct MetricsReport {
    std::vector<double> psnr_recon;    // per test sample vs the sharp oracle
    std::vector<double> psnr_observed; // blurred observation V(y) vs the oracle
    double mean_recon = 0.0;
    double std_recon = 0.0;
    double mean_observed = 0.0;
};

MetricsReport evaluate(const Checkpoint& ckpt, const Dataset& ds);
std::string metrics_to_csv(const MetricsReport& report);

// One cell of the kernel x noise-level results table.
struct TableEntry {
    std::string method;
    std::string kernel;
    double alpha = 0.0;
    double psnr = 0.0;
};
// CSV with one row per method and one column per (kernel, alpha) pair, in the
// fixed kernel order indicator-10/20, gaussian-1/2 and alpha order
// 0.02/0.05/0.10.
std::string format_results_table_csv(const std::vector<TableEntry>& entries);

} // namespace pat
