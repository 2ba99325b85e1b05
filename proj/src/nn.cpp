#include "pat/nn.hpp"

#include "pat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pat {

namespace {

// circular index along the angular axis
inline int wrap(int y, int H) { return ((y % H) + H) % H; }

// reflect-101 index along the radial axis (border pixel not repeated)
inline int refl(int x, int W) {
    if (W == 1) return 0;
    if (x < 0) return -x;
    if (x >= W) return 2 * W - 2 - x;
    return x;
}

} // namespace

// ---------------------------------------------------------------------------
// plan / tape
// ---------------------------------------------------------------------------

struct Unet::Plan {
    enum class Kind { Conv, Relu, Pool, Up, Concat };
    struct Node {
        int c, h, w;
    };
    struct Op {
        Kind kind;
        int src0 = -1, src1 = -1, dst = -1;
        int layer = -1; // conv registry index
    };
    std::vector<Node> nodes;
    std::vector<Op> ops;
    int out_node = -1;
    int H = 0, W = 0;   // polar dims
    int Hp = 0, Wp = 0; // padded dims
    int pad_h = 0, pad_w = 0;
};

struct Unet::Tape {
    Plan plan;
    std::vector<Tensor> vals;
    std::vector<std::vector<int32_t>> pool_idx;
};

Unet::Plan Unet::make_plan(int H, int W) const {
    Plan p;
    p.H = H;
    p.W = W;
    const int div = 1 << (cfg_.levels - 1);
    p.Hp = (H + div - 1) / div * div;
    p.Wp = (W + div - 1) / div * div;
    p.pad_h = (p.Hp - H) / 2;
    p.pad_w = (p.Wp - W) / 2;
    if (p.Wp - W >= W) throw std::invalid_argument("Unet: radial extent too small to pad");

    auto add_node = [&](int c, int h, int w) {
        p.nodes.push_back({c, h, w});
        return static_cast<int>(p.nodes.size()) - 1;
    };
    int layer = 0;
    auto conv_relu = [&](int src, bool relu = true) {
        const int h = p.nodes[src].h, w = p.nodes[src].w;
        const ConvSpec& cs = convs_[layer];
        const int dst = add_node(cs.cout, h, w);
        p.ops.push_back({Plan::Kind::Conv, src, -1, dst, layer});
        ++layer;
        if (!relu) return dst;
        const int r = add_node(cs.cout, h, w);
        p.ops.push_back({Plan::Kind::Relu, dst, -1, r, -1});
        return r;
    };

    int cur = add_node(1, p.Hp, p.Wp); // node 0: padded input
    std::vector<int> skips(cfg_.levels);
    for (int l = 0; l < cfg_.levels; ++l) {
        cur = conv_relu(cur);
        cur = conv_relu(cur);
        skips[l] = cur;
        if (l + 1 < cfg_.levels) {
            const Plan::Node s = p.nodes[cur];
            const int dst = add_node(s.c, s.h / 2, s.w / 2);
            p.ops.push_back({Plan::Kind::Pool, cur, -1, dst, -1});
            cur = dst;
        }
    }
    for (int l = cfg_.levels - 2; l >= 0; --l) {
        const Plan::Node s = p.nodes[cur];
        const int up = add_node(s.c, s.h * 2, s.w * 2);
        p.ops.push_back({Plan::Kind::Up, cur, -1, up, -1});
        cur = conv_relu(up);
        const Plan::Node a = p.nodes[cur];
        const int cat = add_node(a.c + p.nodes[skips[l]].c, a.h, a.w);
        p.ops.push_back({Plan::Kind::Concat, cur, skips[l], cat, -1});
        cur = conv_relu(cat);
        cur = conv_relu(cur);
    }
    p.out_node = conv_relu(cur, /*relu=*/false); // final 1x1 projection
    return p;
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

Unet::Unet(UnetConfig cfg, uint64_t seed) : cfg_(cfg) {
    if (cfg.levels < 1 || cfg.base_width < 1)
        throw std::invalid_argument("Unet: levels and base_width must be positive");
    size_t off = 0;
    auto add_conv = [&](int cin, int cout, int k) {
        ConvSpec cs{cin, cout, k, off, off + static_cast<size_t>(cout) * cin * k * k};
        off = cs.b_off + cout;
        convs_.push_back(cs);
    };
    // same structural order as make_plan: encoder, decoder, final projection
    for (int l = 0; l < cfg.levels; ++l) {
        const int w = cfg.base_width << l;
        add_conv(l == 0 ? 1 : (w >> 1), w, 3);
        add_conv(w, w, 3);
    }
    for (int l = cfg.levels - 2; l >= 0; --l) {
        const int w = cfg.base_width << l;
        add_conv(w << 1, w, 3); // up projection
        add_conv(w << 1, w, 3); // after concat
        add_conv(w, w, 3);
    }
    add_conv(cfg.base_width, 1, 1);

    params_.assign(off, 0.0);
    const CounterRng rng(seed, static_cast<uint64_t>(SeedStream::Init));
    for (const ConvSpec& cs : convs_) {
        const double limit = std::sqrt(6.0 / (static_cast<double>(cs.cin) * cs.k * cs.k));
        for (size_t i = cs.w_off; i < cs.b_off; ++i)
            params_[i] = rng.uniform(i, -limit, limit);
        // biases start at zero
    }
}

// ---------------------------------------------------------------------------
// primitive forward/backward kernels
// ---------------------------------------------------------------------------

namespace {

void conv_forward(const Tensor& in, const double* w, const double* b, int k, Tensor& out) {
    const int H = in.h, W = in.w, cin = in.c, cout = out.c;
    if (k == 1) {
        for (int co = 0; co < cout; ++co) {
            double* dst = &out.v[static_cast<size_t>(co) * H * W];
            std::fill(dst, dst + static_cast<size_t>(H) * W, b[co]);
            for (int ci = 0; ci < cin; ++ci) {
                const double wk = w[static_cast<size_t>(co) * cin + ci];
                const double* src = &in.v[static_cast<size_t>(ci) * H * W];
                for (size_t i = 0; i < static_cast<size_t>(H) * W; ++i) dst[i] += wk * src[i];
            }
        }
        return;
    }
    for (int co = 0; co < cout; ++co) {
        double* outc = &out.v[static_cast<size_t>(co) * H * W];
        std::fill(outc, outc + static_cast<size_t>(H) * W, b[co]);
        for (int ci = 0; ci < cin; ++ci) {
            const double* inc = &in.v[static_cast<size_t>(ci) * H * W];
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const double wk =
                        w[((static_cast<size_t>(co) * cin + ci) * 3 + (dy + 1)) * 3 + (dx + 1)];
                    for (int y = 0; y < H; ++y) {
                        const double* src = inc + static_cast<size_t>(wrap(y + dy, H)) * W;
                        double* dst = outc + static_cast<size_t>(y) * W;
                        if (dx == 0 || W == 1) {
                            for (int x = 0; x < W; ++x) dst[x] += wk * src[x];
                        } else if (dx == -1) {
                            dst[0] += wk * src[1];
                            for (int x = 1; x < W; ++x) dst[x] += wk * src[x - 1];
                        } else {
                            for (int x = 0; x + 1 < W; ++x) dst[x] += wk * src[x + 1];
                            dst[W - 1] += wk * src[W - 2];
                        }
                    }
                }
            }
        }
    }
}

// accumulates dW, dB and dIn for one conv
void conv_backward(const Tensor& in, const Tensor& d_out, const double* w, int k, Tensor& d_in,
                   double* d_w, double* d_b) {
    const int H = in.h, W = in.w, cin = in.c, cout = d_out.c;
    if (k == 1) {
        for (int co = 0; co < cout; ++co) {
            const double* do_c = &d_out.v[static_cast<size_t>(co) * H * W];
            double acc_b = 0;
            for (size_t i = 0; i < static_cast<size_t>(H) * W; ++i) acc_b += do_c[i];
            d_b[co] += acc_b;
            for (int ci = 0; ci < cin; ++ci) {
                const double* inc = &in.v[static_cast<size_t>(ci) * H * W];
                double* dic = &d_in.v[static_cast<size_t>(ci) * H * W];
                const double wk = w[static_cast<size_t>(co) * cin + ci];
                double acc_w = 0;
                for (size_t i = 0; i < static_cast<size_t>(H) * W; ++i) {
                    acc_w += do_c[i] * inc[i];
                    dic[i] += wk * do_c[i];
                }
                d_w[static_cast<size_t>(co) * cin + ci] += acc_w;
            }
        }
        return;
    }
    for (int co = 0; co < cout; ++co) {
        const double* do_c = &d_out.v[static_cast<size_t>(co) * H * W];
        double acc_b = 0;
        for (size_t i = 0; i < static_cast<size_t>(H) * W; ++i) acc_b += do_c[i];
        d_b[co] += acc_b;
        for (int ci = 0; ci < cin; ++ci) {
            const double* inc = &in.v[static_cast<size_t>(ci) * H * W];
            double* dic = &d_in.v[static_cast<size_t>(ci) * H * W];
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const size_t widx =
                        ((static_cast<size_t>(co) * cin + ci) * 3 + (dy + 1)) * 3 + (dx + 1);
                    const double wk = w[widx];
                    double acc_w = 0;
                    for (int y = 0; y < H; ++y) {
                        const int ys = wrap(y + dy, H);
                        const double* src = inc + static_cast<size_t>(ys) * W;
                        double* dsrc = dic + static_cast<size_t>(ys) * W;
                        const double* dor = do_c + static_cast<size_t>(y) * W;
                        if (dx == 0 || W == 1) {
                            for (int x = 0; x < W; ++x) {
                                acc_w += dor[x] * src[x];
                                dsrc[x] += wk * dor[x];
                            }
                        } else if (dx == -1) {
                            acc_w += dor[0] * src[1];
                            dsrc[1] += wk * dor[0];
                            for (int x = 1; x < W; ++x) {
                                acc_w += dor[x] * src[x - 1];
                                dsrc[x - 1] += wk * dor[x];
                            }
                        } else {
                            for (int x = 0; x + 1 < W; ++x) {
                                acc_w += dor[x] * src[x + 1];
                                dsrc[x + 1] += wk * dor[x];
                            }
                            acc_w += dor[W - 1] * src[W - 2];
                            dsrc[W - 2] += wk * dor[W - 1];
                        }
                    }
                    d_w[widx] += acc_w;
                }
            }
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// forward / backward over the tape
// ---------------------------------------------------------------------------

PolarImage Unet::forward(const PolarImage& in, Tape& tape) const {
    if (!all_finite(in.v)) throw std::invalid_argument("Unet::forward: non-finite input");
    if (!all_finite(params_)) throw std::invalid_argument("Unet::forward: non-finite weights");
    tape.plan = make_plan(in.n_phi, in.n_r);
    const Plan& p = tape.plan;
    tape.vals.clear();
    tape.vals.reserve(p.nodes.size());
    for (const auto& nd : p.nodes) tape.vals.emplace_back(nd.c, nd.h, nd.w);
    tape.pool_idx.clear();

    // embed the polar image: circular pad along phi, reflect along r
    Tensor& x0 = tape.vals[0];
    for (int y = 0; y < p.Hp; ++y) {
        const int ys = wrap(y - p.pad_h, p.H);
        for (int x = 0; x < p.Wp; ++x) {
            const int xs = refl(x - p.pad_w, p.W);
            x0.at(0, y, x) = in.at(ys, xs);
        }
    }

    for (const auto& op : p.ops) {
        const Tensor& a = tape.vals[op.src0];
        Tensor& d = tape.vals[op.dst];
        switch (op.kind) {
            case Plan::Kind::Conv: {
                const ConvSpec& cs = convs_[op.layer];
                conv_forward(a, &params_[cs.w_off], &params_[cs.b_off], cs.k, d);
                break;
            }
            case Plan::Kind::Relu:
                for (size_t i = 0; i < a.size(); ++i) d.v[i] = a.v[i] > 0 ? a.v[i] : 0.0;
                break;
            case Plan::Kind::Pool: {
                std::vector<int32_t> idx(d.size());
                for (int c = 0; c < a.c; ++c)
                    for (int y = 0; y < d.h; ++y)
                        for (int x = 0; x < d.w; ++x) {
                            int best = -1;
                            double bv = -std::numeric_limits<double>::infinity();
                            for (int sy = 2 * y; sy < 2 * y + 2; ++sy)
                                for (int sx = 2 * x; sx < 2 * x + 2; ++sx) {
                                    const int flat =
                                        (c * a.h + sy) * a.w + sx;
                                    if (a.v[flat] > bv) {
                                        bv = a.v[flat];
                                        best = flat;
                                    }
                                }
                            d.at(c, y, x) = bv;
                            idx[(static_cast<size_t>(c) * d.h + y) * d.w + x] = best;
                        }
                tape.pool_idx.push_back(std::move(idx));
                break;
            }
            case Plan::Kind::Up:
                for (int c = 0; c < d.c; ++c)
                    for (int y = 0; y < d.h; ++y)
                        for (int x = 0; x < d.w; ++x) d.at(c, y, x) = a.at(c, y / 2, x / 2);
                break;
            case Plan::Kind::Concat: {
                const Tensor& b = tape.vals[op.src1];
                std::copy(a.v.begin(), a.v.end(), d.v.begin());
                std::copy(b.v.begin(), b.v.end(), d.v.begin() + a.size());
                break;
            }
        }
    }

    // crop back to the polar grid
    const Tensor& outp = tape.vals[p.out_node];
    PolarImage out(p.H, p.W);
    for (int y = 0; y < p.H; ++y)
        for (int x = 0; x < p.W; ++x) out.at(y, x) = outp.at(0, y + p.pad_h, x + p.pad_w);
    return out;
}

PolarImage Unet::apply(const PolarImage& in) const {
    Tape tape;
    return forward(in, tape);
}

void Unet::backward(const Tape& tape, const PolarImage& d_out, std::vector<double>& grad) const {
    const Plan& p = tape.plan;
    if (d_out.n_phi != p.H || d_out.n_r != p.W)
        throw std::invalid_argument("Unet::backward: gradient shape mismatch");
    if (grad.size() != params_.size())
        throw std::invalid_argument("Unet::backward: grad buffer size mismatch");

    std::vector<Tensor> dvals;
    dvals.reserve(p.nodes.size());
    for (const auto& nd : p.nodes) dvals.emplace_back(nd.c, nd.h, nd.w);
    Tensor& dtop = dvals[p.out_node];
    for (int y = 0; y < p.H; ++y)
        for (int x = 0; x < p.W; ++x) dtop.at(0, y + p.pad_h, x + p.pad_w) = d_out.at(y, x);

    int pool_count = static_cast<int>(tape.pool_idx.size());
    for (auto it = p.ops.rbegin(); it != p.ops.rend(); ++it) {
        const auto& op = *it;
        const Tensor& dd = dvals[op.dst];
        Tensor& da = dvals[op.src0];
        switch (op.kind) {
            case Plan::Kind::Conv: {
                const ConvSpec& cs = convs_[op.layer];
                conv_backward(tape.vals[op.src0], dd, &params_[cs.w_off], cs.k, da,
                              &grad[cs.w_off], &grad[cs.b_off]);
                break;
            }
            case Plan::Kind::Relu: {
                const Tensor& val = tape.vals[op.dst];
                for (size_t i = 0; i < dd.size(); ++i)
                    if (val.v[i] > 0) da.v[i] += dd.v[i];
                break;
            }
            case Plan::Kind::Pool: {
                const auto& idx = tape.pool_idx[--pool_count];
                for (size_t i = 0; i < dd.size(); ++i) da.v[idx[i]] += dd.v[i];
                break;
            }
            case Plan::Kind::Up:
                for (int c = 0; c < dd.c; ++c)
                    for (int y = 0; y < dd.h; ++y)
                        for (int x = 0; x < dd.w; ++x) da.at(c, y / 2, x / 2) += dd.at(c, y, x);
                break;
            case Plan::Kind::Concat: {
                Tensor& db = dvals[op.src1];
                for (size_t i = 0; i < da.size(); ++i) da.v[i] += dd.v[i];
                for (size_t i = 0; i < db.size(); ++i) db.v[i] += dd.v[da.size() + i];
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// losses
// ---------------------------------------------------------------------------

std::string to_string(LossKind k) {
    switch (k) {
        case LossKind::Nn2i: return "nn2i";
        case LossKind::Supervised: return "supervised";
        case LossKind::Ssltv: return "ssltv";
        case LossKind::Dip: return "dip";
    }
    return "nn2i";
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "nn2i") return LossKind::Nn2i;
    if (s == "supervised") return LossKind::Supervised;
    if (s == "ssltv") return LossKind::Ssltv;
    if (s == "dip") return LossKind::Dip;
    throw std::invalid_argument("unknown loss kind: " + s);
}

namespace {

// shared batch driver: per-sample forward/backward with deterministic
// serial reduction of the per-sample gradients
template <typename SampleFn>
LossValue batched_loss(const Unet& net, int n, SampleFn&& fn) {
    if (n <= 0) throw std::invalid_argument("loss: empty batch");
    std::vector<double> vals(n, 0.0);
    std::vector<std::vector<double>> grads(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        grads[i].assign(net.param_count(), 0.0);
        vals[i] = fn(i, grads[i]);
    }
    LossValue out;
    out.grad.assign(net.param_count(), 0.0);
    for (int i = 0; i < n; ++i) {
        out.value += vals[i];
        for (size_t j = 0; j < out.grad.size(); ++j) out.grad[j] += grads[i][j];
    }
    return out;
}

PolarImage scaled_residual(const PolarImage& a, const PolarImage& b, double scale,
                           double* sq = nullptr) {
    PolarImage r(a.n_phi, a.n_r);
    double s = 0;
    for (size_t i = 0; i < r.v.size(); ++i) {
        const double d = a.v[i] - b.v[i];
        s += d * d;
        r.v[i] = scale * d;
    }
    if (sq) *sq = s;
    return r;
}

} // namespace

LossValue loss_nn2i(const Unet& net, const std::vector<Nn2iSample>& batch,
                    const AngularKernel& A) {
    const int n = static_cast<int>(batch.size());
    const double inv_n = 1.0 / n;
    return batched_loss(net, n, [&](int i, std::vector<double>& grad) {
        const PolarImage& y = *batch[i].y_p;
        const PolarImage& eta = *batch[i].eta_p;
        if (y.n_phi != eta.n_phi || y.n_r != eta.n_r)
            throw std::invalid_argument("loss_nn2i: shape mismatch");
        PolarImage input(y.n_phi, y.n_r), target(y.n_phi, y.n_r);
        for (size_t k = 0; k < y.v.size(); ++k) {
            input.v[k] = y.v[k] + eta.v[k];
            target.v[k] = y.v[k] - eta.v[k];
        }
        Unet::Tape tape;
        const PolarImage out = net.forward(input, tape);
        const PolarImage pred = angular_convolve(out, A);
        double sq = 0;
        const PolarImage dpred = scaled_residual(pred, target, 2.0 * inv_n, &sq);
        net.backward(tape, angular_convolve_adjoint(dpred, A), grad);
        return sq * inv_n;
    });
}

LossValue loss_supervised(const Unet& net, const std::vector<PairSample>& batch) {
    const int n = static_cast<int>(batch.size());
    const double inv_n = 1.0 / n;
    return batched_loss(net, n, [&](int i, std::vector<double>& grad) {
        const PolarImage& y = *batch[i].input;
        const PolarImage& x = *batch[i].target;
        Unet::Tape tape;
        const PolarImage out = net.forward(y, tape);
        if (out.v.size() != x.v.size())
            throw std::invalid_argument("loss_supervised: shape mismatch");
        double sq = 0;
        const PolarImage dout = scaled_residual(out, x, 2.0 * inv_n, &sq);
        net.backward(tape, dout, grad);
        return sq * inv_n;
    });
}

LossValue loss_ssltv(const Unet& net, const std::vector<const PolarImage*>& batch,
                     const AngularKernel& A, double lambda) {
    if (lambda < 0) throw std::invalid_argument("loss_ssltv: lambda must be >= 0");
    const int n = static_cast<int>(batch.size());
    const double inv_n = 1.0 / n;
    return batched_loss(net, n, [&](int i, std::vector<double>& grad) {
        const PolarImage& y = *batch[i];
        Unet::Tape tape;
        const PolarImage out = net.forward(y, tape);
        const PolarImage pred = angular_convolve(out, A);
        double sq = 0;
        const PolarImage dpred = scaled_residual(pred, y, 2.0 * inv_n, &sq);
        PolarImage dout = angular_convolve_adjoint(dpred, A);
        double value = sq * inv_n;
        if (lambda > 0) {
            value += lambda * inv_n * total_variation(out);
            PolarImage tvg(out.n_phi, out.n_r);
            total_variation_subgrad(out, tvg);
            for (size_t k = 0; k < dout.v.size(); ++k) dout.v[k] += lambda * inv_n * tvg.v[k];
        }
        net.backward(tape, dout, grad);
        return value;
    });
}

LossValue loss_dip(const Unet& net, const PolarImage& z_p, const PolarImage& y_p,
                   const AngularKernel& A) {
    Unet::Tape tape;
    const PolarImage out = net.forward(z_p, tape);
    const PolarImage pred = angular_convolve(out, A);
    if (pred.v.size() != y_p.v.size()) throw std::invalid_argument("loss_dip: shape mismatch");
    double sq = 0;
    const PolarImage dpred = scaled_residual(pred, y_p, 2.0, &sq);
    LossValue out_v;
    out_v.value = sq;
    out_v.grad.assign(net.param_count(), 0.0);
    net.backward(tape, angular_convolve_adjoint(dpred, A), out_v.grad);
    return out_v;
}

double total_variation(const PolarImage& u) {
    double tv = 0;
    for (int j = 0; j < u.n_phi; ++j) {
        const int jn = (j + 1) % u.n_phi;
        for (int i = 0; i < u.n_r; ++i) {
            tv += std::abs(u.at(jn, i) - u.at(j, i));
            if (i + 1 < u.n_r) tv += std::abs(u.at(j, i + 1) - u.at(j, i));
        }
    }
    return tv;
}

void total_variation_subgrad(const PolarImage& u, PolarImage& g) {
    if (g.n_phi != u.n_phi || g.n_r != u.n_r) g = PolarImage(u.n_phi, u.n_r);
    auto sgn = [](double d) { return d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0); };
    for (int j = 0; j < u.n_phi; ++j) {
        const int jn = (j + 1) % u.n_phi;
        for (int i = 0; i < u.n_r; ++i) {
            const double s = sgn(u.at(jn, i) - u.at(j, i));
            g.at(jn, i) += s;
            g.at(j, i) -= s;
            if (i + 1 < u.n_r) {
                const double t = sgn(u.at(j, i + 1) - u.at(j, i));
                g.at(j, i + 1) += t;
                g.at(j, i) -= t;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

AdamState make_adam(size_t n_params, AdamConfig cfg) {
    AdamState s;
    s.cfg = cfg;
    s.m.assign(n_params, 0.0);
    s.v.assign(n_params, 0.0);
    return s;
}

void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grad) {
    if (params.size() != state.m.size() || grad.size() != state.m.size())
        throw std::invalid_argument("adam_step: size mismatch");
    for (double g : grad)
        if (!std::isfinite(g)) throw std::runtime_error("adam_step: non-finite gradient");
    state.step += 1;
    const double b1 = state.cfg.beta1, b2 = state.cfg.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (size_t i = 0; i < params.size(); ++i) {
        state.m[i] = b1 * state.m[i] + (1 - b1) * grad[i];
        state.v[i] = b2 * state.v[i] + (1 - b2) * grad[i] * grad[i];
        const double mhat = state.m[i] / c1;
        const double vhat = state.v[i] / c2;
        params[i] -= state.cfg.lr * mhat / (std::sqrt(vhat) + state.cfg.eps);
    }
}

} // namespace pat
