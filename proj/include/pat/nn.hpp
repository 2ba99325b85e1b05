#pragma once

#include "pat/angconv.hpp"
#include "pat/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pat {

// Dense CHW tensor, double precision throughout.
struct Tensor {
    int c = 0, h = 0, w = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int c_, int h_, int w_)
        : c(c_), h(h_), w(w_), v(static_cast<size_t>(c_) * h_ * w_, 0.0) {}

    double& at(int ch, int y, int x) {
        return v[(static_cast<size_t>(ch) * h + y) * w + x];
    }
    double at(int ch, int y, int x) const {
        return v[(static_cast<size_t>(ch) * h + y) * w + x];
    }
    size_t size() const { return v.size(); }
};

struct UnetConfig {
    int levels = 4;     // resolution levels
    int base_width = 16; // channels at full resolution, doubling per level

    bool operator==(const UnetConfig&) const = default;
};

// Encoder-decoder with skip connections on polar grids: two 3x3 conv+ReLU
// blocks per level, 2x2 max-pool down, nearest-neighbor upsample + conv up,
// final 1x1 projection.  Convolutions pad circularly along the angular axis
// and by reflection along the radial axis.  Inputs whose dims are not
// divisible by 2^(levels-1) are padded symmetrically (circular along phi,
// reflect along r) and cropped after the final layer.
class Unet {
  public:
    Unet(UnetConfig cfg, uint64_t seed);

    const UnetConfig& config() const { return cfg_; }
    size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    struct Tape; // retained activations of one forward pass

    PolarImage apply(const PolarImage& in) const;
    PolarImage forward(const PolarImage& in, Tape& tape) const;
    // Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
    void backward(const Tape& tape, const PolarImage& d_out, std::vector<double>& grad) const;

  private:
    struct ConvSpec {
        int cin, cout, k;
        size_t w_off, b_off;
    };
    struct Plan;

    Plan make_plan(int H, int W) const;

    UnetConfig cfg_;
    std::vector<ConvSpec> convs_;
    std::vector<double> params_;
};

// ---------------------------------------------------------------------------
// Losses.  All return the batch-mean objective and its gradient with respect
// to the flat parameter vector; gradients are exact reverse-mode derivatives.
// ---------------------------------------------------------------------------

enum class LossKind { Nn2i, Supervised, Ssltv, Dip };
std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

struct LossValue {
    double value = 0.0;
    std::vector<double> grad;
};

struct Nn2iSample {
    const PolarImage* y_p;   // noisy polar data
    const PolarImage* eta_p; // additional noise draw
};
struct PairSample {
    const PolarImage* input;
    const PolarImage* target;
};

// (1/N) sum_n || A B(y+eta) - (y-eta) ||^2
LossValue loss_nn2i(const Unet& net, const std::vector<Nn2iSample>& batch,
                    const AngularKernel& A);

// (1/N) sum_n || B(y) - x ||^2
LossValue loss_supervised(const Unet& net, const std::vector<PairSample>& batch);

// (1/N) sum_n || A B(y) - y ||^2 + lambda * TV(B(y))
LossValue loss_ssltv(const Unet& net, const std::vector<const PolarImage*>& batch,
                     const AngularKernel& A, double lambda);

// || A B(z) - y ||^2 for a fixed random input z
LossValue loss_dip(const Unet& net, const PolarImage& z_p, const PolarImage& y_p,
                   const AngularKernel& A);

// Anisotropic discrete total variation: absolute forward differences,
// circular along phi, one-sided at the radial border.  Subgradient is 0 at
// exact ties.
double total_variation(const PolarImage& u);
void total_variation_subgrad(const PolarImage& u, PolarImage& g);

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

struct AdamConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    AdamConfig cfg;
    std::vector<double> m, v;
    long step = 0;
};

AdamState make_adam(size_t n_params, AdamConfig cfg = {});

// Standard bias-corrected update; throws on non-finite gradients.
void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grad);

} // namespace pat
