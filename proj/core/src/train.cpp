// Copyright 2026 the bdet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bdet/loss.hpp"
#include "bdet/parallel.hpp"
#include "bdet/resample.hpp"
#include "bdet/rng.hpp"

namespace bdet {

namespace {

Tensor sigmoid_map(const Tensor& a) {
    Tensor p = a;
    for (auto& v : p.v) v = sigmoid(v);
    return p;
}

std::string stage_block_name(int k, int j, const char* what) {
    return "base.s" + std::to_string(k) + ".c" + std::to_string(j) + "." + what;
}

std::string head_block_name(int s, int k, const char* what) {
    return "side.s" + std::to_string(s) + ".k" + std::to_string(k) + "." + what;
}

void push_stage_blocks(ModelParams& m, int k, std::vector<ParamBlockRef>& out) {
    auto& convs = m.base.stages[k].convs;
    for (std::size_t j = 0; j < convs.size(); ++j) {
        out.push_back({stage_block_name(k, static_cast<int>(j), "w"), &convs[j].w});
        out.push_back({stage_block_name(k, static_cast<int>(j), "b"), &convs[j].b});
    }
}

void push_head_blocks(ModelParams& m, int s, int k, bool include_up,
                      std::vector<ParamBlockRef>& out) {
    out.push_back({head_block_name(s, k, "feat"), &m.side[s][k].w_feat});
    if (include_up) out.push_back({head_block_name(s, k, "up"), &m.side[s][k].w_up});
}

// Backprop through one side head. Returns the gradient at the stage tap
// when requested; accumulates head gradients when buffers are given.
Tensor backprop_side_head(const SideHead& head, const Tensor& tap, const Tensor& side,
                          const Tensor& g_side_up, std::vector<double>* g_feat,
                          std::vector<double>* g_up, bool need_tap_grad) {
    if (g_up)
        upsample_transposed_backward_kernel(side, g_side_up, head.up_factor,
                                            upsample_kernel_size(head.up_factor), *g_up);
    const Tensor g_side = upsample_transposed_backward_input(g_side_up, head.up_factor,
                                                             head.w_up, side.h, side.w);
    Tensor g_tap;
    if (need_tap_grad) g_tap = Tensor(tap.c, tap.h, tap.w);
    for (int c = 0; c < tap.c; ++c) {
        if (g_feat) {
            double acc = 0.0;
            auto tc = tap.channel(c);
            for (std::size_t i = 0; i < tc.size(); ++i) acc += tc[i] * g_side.v[i];
            (*g_feat)[c] += acc;
        }
        if (need_tap_grad) {
            const double wc = head.w_feat[c];
            auto gc = g_tap.channel(c);
            for (std::size_t i = 0; i < gc.size(); ++i) gc[i] = wc * g_side.v[i];
        }
    }
    return g_tap;
}

// Backprop through the convs of one stage. g arrives at the stage output
// (last relu). Returns the gradient at the stage input when requested.
Tensor backprop_stage(const Stage& st, const StageTrace& tr, const Tensor& stage_input,
                      Tensor g, Stage* g_stage, bool need_input_grad) {
    for (int j = static_cast<int>(st.convs.size()) - 1; j >= 0; --j) {
        g = relu_backward(tr.pre[j], g);
        const Tensor& in_j = j == 0 ? stage_input : tr.post[j - 1];
        const bool want_gin = need_input_grad || j > 0;
        Tensor g_in;
        if (want_gin) g_in = Tensor(in_j.c, in_j.h, in_j.w);
        conv2d_same_backward(st.convs[j], in_j, g, want_gin ? &g_in : nullptr,
                             g_stage ? &g_stage->convs[j].w : nullptr,
                             g_stage ? &g_stage->convs[j].b : nullptr);
        g = std::move(g_in);
    }
    return g;
}

void check_selector(const ModelParams& m, const LossSelector& sel) {
    switch (sel.kind) {
        case LossSelector::Kind::side_output:
            if (sel.index < 0 || sel.index >= m.n_stages())
                throw std::invalid_argument("LossSelector: side-output stage out of range");
            break;
        case LossSelector::Kind::scale_specific:
            if (sel.index < 0 || sel.index >= m.n_scales())
                throw std::invalid_argument("LossSelector: scale index out of range");
            if (sel.index != 0)
                throw std::invalid_argument(
                    "LossSelector: the scale-specific loss is applied at scale 1 only");
            break;
        case LossSelector::Kind::boundary:
            break;
    }
}

class BatchSampler {
public:
    BatchSampler(int n, std::uint64_t seed) : rng_(seed), order_(n) {
        std::iota(order_.begin(), order_.end(), 0);
        rng_.shuffle(order_);
    }
    int next() {
        if (pos_ == order_.size()) {
            rng_.shuffle(order_);
            pos_ = 0;
        }
        return order_[pos_++];
    }

private:
    Rng rng_;
    std::vector<int> order_;
    std::size_t pos_ = 0;
};

// One SGD phase over a fixed selector. Per-item gradients are computed in
// parallel and reduced in batch order, so results do not depend on the
// worker count. Gradients are normalized per pixel and per batch item.
void run_phase(ModelParams& m, const std::vector<TrainSample>& data, const TrainConfig& cfg,
               const LossSelector& sel, int iters, std::uint64_t seed_tag, const char* label,
               std::ostream* progress) {
    if (data.empty()) throw std::invalid_argument("train: empty dataset");
    BatchSampler sampler(static_cast<int>(data.size()), derive_seed(cfg.seed, seed_tag));
    const int batch = std::min<int>(cfg.batch_size, static_cast<int>(data.size()));

    for (int iter = 0; iter < iters; ++iter) {
        std::vector<int> idx(batch);
        for (int i = 0; i < batch; ++i) idx[i] = sampler.next();

        std::vector<ModelParams> item_grads(batch);
        std::vector<double> item_loss(batch, 0.0);
        parallel_for(batch, cfg.threads, [&](int i) {
            item_grads[i] = zeros_like(m);
            const double loss = compute_loss_and_grads(m, data[idx[i]], sel, cfg.beta, item_grads[i]);
            const double npix = static_cast<double>(data[idx[i]].image.h) *
                                static_cast<double>(data[idx[i]].image.w);
            item_loss[i] = loss / npix;
            for (auto& blk : update_set_blocks(item_grads[i], sel))
                for (auto& v : *blk.data) v /= npix;
        });

        auto acc_blocks = update_set_blocks(item_grads[0], sel);
        for (int i = 1; i < batch; ++i) {
            auto blocks = update_set_blocks(item_grads[i], sel);
            for (std::size_t b = 0; b < blocks.size(); ++b)
                for (std::size_t v = 0; v < blocks[b].data->size(); ++v)
                    (*acc_blocks[b].data)[v] += (*blocks[b].data)[v];
        }

        const double inv_batch = 1.0 / batch;
        auto params = update_set_blocks(m, sel);
        for (std::size_t b = 0; b < params.size(); ++b) {
            auto& w = *params[b].data;
            const auto& g = *acc_blocks[b].data;
            for (std::size_t v = 0; v < w.size(); ++v)
                w[v] -= cfg.learning_rate * (g[v] * inv_batch + cfg.weight_decay * w[v]);
        }

        if (progress && (iter % 50 == 0 || iter + 1 == iters)) {
            double mean_loss = 0.0;
            for (double l : item_loss) mean_loss += l;
            mean_loss /= batch;
            (*progress) << label << " iter " << iter << "/" << iters
                        << " batch-loss " << mean_loss << "\n";
        }
    }
}

}  // namespace

void TrainConfig::validate() const {
    net.validate();
    if (!(beta > 0.0) || !(beta < 1.0)) throw std::invalid_argument("TrainConfig: beta outside (0,1)");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (weight_decay < 0.0) throw std::invalid_argument("TrainConfig: weight_decay must be >= 0");
    if (iters_greedy < 0 || iters_scale < 0 || iters_fuse < 0)
        throw std::invalid_argument("TrainConfig: iteration counts must be >= 0");
}

std::vector<ParamBlockRef> all_param_blocks(ModelParams& m) {
    std::vector<ParamBlockRef> out;
    for (int k = 0; k < m.n_stages(); ++k) push_stage_blocks(m, k, out);
    for (int s = 0; s < m.n_scales(); ++s) {
        for (int k = 0; k < m.n_stages(); ++k) push_head_blocks(m, s, k, true, out);
        out.push_back({"fuse.s" + std::to_string(s), &m.w_fuse[s]});
    }
    out.push_back({"scale", &m.w_scale});
    return out;
}

std::vector<ParamBlockRef> update_set_blocks(ModelParams& m, const LossSelector& sel) {
    check_selector(m, sel);
    std::vector<ParamBlockRef> out;
    switch (sel.kind) {
        case LossSelector::Kind::side_output: {
            push_stage_blocks(m, sel.index, out);
            push_head_blocks(m, 0, sel.index, m.learnable_up, out);
            break;
        }
        case LossSelector::Kind::scale_specific: {
            for (int k = 0; k < m.n_stages(); ++k) push_stage_blocks(m, k, out);
            for (int k = 0; k < m.n_stages(); ++k) push_head_blocks(m, 0, k, m.learnable_up, out);
            out.push_back({"fuse.s0", &m.w_fuse[0]});
            break;
        }
        case LossSelector::Kind::boundary: {
            for (int s = 0; s < m.n_scales(); ++s) {
                for (int k = 0; k < m.n_stages(); ++k) push_head_blocks(m, s, k, m.learnable_up, out);
                out.push_back({"fuse.s" + std::to_string(s), &m.w_fuse[s]});
            }
            out.push_back({"scale", &m.w_scale});
            break;
        }
    }
    return out;
}

ModelParams zeros_like(const ModelParams& m) {
    ModelParams z = m;
    for (auto& blk : all_param_blocks(z)) std::fill(blk.data->begin(), blk.data->end(), 0.0);
    return z;
}

double compute_loss(const ModelParams& m, const TrainSample& sample, const LossSelector& sel,
                    double beta) {
    check_selector(m, sel);
    const Tensor& img = sample.image;
    switch (sel.kind) {
        case LossSelector::Kind::side_output: {
            const ScaleTrace tr = forward_scale(m, img, 0, img.h, img.w, sel.index + 1);
            return weighted_bce(sigmoid_map(tr.side_up[sel.index]), sample.gt, beta);
        }
        case LossSelector::Kind::scale_specific: {
            const ScaleTrace tr = forward_scale(m, img, 0, img.h, img.w);
            return weighted_bce(sigmoid_map(tr.activation), sample.gt, beta);
        }
        case LossSelector::Kind::boundary: {
            const ForwardResult res = forward_full(m, img);
            return weighted_bce(res.prob, sample.gt, beta);
        }
    }
    return 0.0;
}

double compute_loss_and_grads(const ModelParams& m, const TrainSample& sample,
                              const LossSelector& sel, double beta, ModelParams& grads) {
    check_selector(m, sel);
    const Tensor& img = sample.image;
    const bool up_grads = m.learnable_up;

    switch (sel.kind) {
        case LossSelector::Kind::side_output: {
            const int k = sel.index;
            const ScaleTrace tr = forward_scale(m, img, 0, img.h, img.w, k + 1);
            const Tensor prob = sigmoid_map(tr.side_up[k]);
            const double loss = weighted_bce(prob, sample.gt, beta);

            const Tensor g_act = weighted_bce_grad_activation(prob, sample.gt, beta);
            Tensor g_tap = backprop_side_head(m.side[0][k], tr.taps[k], tr.side[k], g_act,
                                              &grads.side[0][k].w_feat,
                                              up_grads ? &grads.side[0][k].w_up : nullptr, true);
            const Tensor& stage_input = k == 0 ? tr.image : tr.stages[k - 1].pooled;
            backprop_stage(m.base.stages[k], tr.stages[k], stage_input, std::move(g_tap),
                           &grads.base.stages[k], false);
            return loss;
        }

        case LossSelector::Kind::scale_specific: {
            const ScaleTrace tr = forward_scale(m, img, 0, img.h, img.w);
            const Tensor prob = sigmoid_map(tr.activation);
            const double loss = weighted_bce(prob, sample.gt, beta);
            const Tensor g_act = weighted_bce_grad_activation(prob, sample.gt, beta);

            const int K = m.n_stages();
            std::vector<Tensor> g_taps(K);
            for (int k = 0; k < K; ++k) {
                // fusion weight gradient
                double acc = 0.0;
                for (std::size_t i = 0; i < g_act.v.size(); ++i)
                    acc += tr.side_up[k].v[i] * g_act.v[i];
                grads.w_fuse[0][k] += acc;

                Tensor g_side_up(1, g_act.h, g_act.w);
                const double wk = m.w_fuse[0][k];
                for (std::size_t i = 0; i < g_side_up.v.size(); ++i)
                    g_side_up.v[i] = wk * g_act.v[i];
                g_taps[k] = backprop_side_head(m.side[0][k], tr.taps[k], tr.side[k], g_side_up,
                                               &grads.side[0][k].w_feat,
                                               up_grads ? &grads.side[0][k].w_up : nullptr, true);
            }

            Tensor g_next;
            for (int k = K - 1; k >= 0; --k) {
                Tensor g_tap = std::move(g_taps[k]);
                if (k < K - 1) {
                    const Tensor from_pool =
                        maxpool2_backward(tr.taps[k], g_next, tr.stages[k].pool_argmax);
                    for (std::size_t i = 0; i < g_tap.v.size(); ++i) g_tap.v[i] += from_pool.v[i];
                }
                const Tensor& stage_input = k == 0 ? tr.image : tr.stages[k - 1].pooled;
                g_next = backprop_stage(m.base.stages[k], tr.stages[k], stage_input,
                                        std::move(g_tap), &grads.base.stages[k], k > 0);
            }
            return loss;
        }

        case LossSelector::Kind::boundary: {
            const ForwardResult res = forward_full(m, img);
            const double loss = weighted_bce(res.prob, sample.gt, beta);
            const Tensor g_fused = weighted_bce_grad_activation(res.prob, sample.gt, beta);

            for (int s = 0; s < m.n_scales(); ++s) {
                const ScaleTrace& tr = res.scales[s];
                double acc = 0.0;
                for (std::size_t i = 0; i < g_fused.v.size(); ++i)
                    acc += tr.activation_base.v[i] * g_fused.v[i];
                grads.w_scale[s] += acc;

                Tensor g_act_base(1, g_fused.h, g_fused.w);
                const double ws = m.w_scale[s];
                for (std::size_t i = 0; i < g_act_base.v.size(); ++i)
                    g_act_base.v[i] = ws * g_fused.v[i];
                const Tensor g_act =
                    resize_bilinear_backward(g_act_base, tr.activation.h, tr.activation.w);

                for (int k = 0; k < m.n_stages(); ++k) {
                    double facc = 0.0;
                    for (std::size_t i = 0; i < g_act.v.size(); ++i)
                        facc += tr.side_up[k].v[i] * g_act.v[i];
                    grads.w_fuse[s][k] += facc;

                    Tensor g_side_up(1, g_act.h, g_act.w);
                    const double wk = m.w_fuse[s][k];
                    for (std::size_t i = 0; i < g_side_up.v.size(); ++i)
                        g_side_up.v[i] = wk * g_act.v[i];
                    backprop_side_head(m.side[s][k], tr.taps[k], tr.side[k], g_side_up,
                                       &grads.side[s][k].w_feat,
                                       up_grads ? &grads.side[s][k].w_up : nullptr, false);
                }
            }
            return loss;
        }
    }
    return 0.0;
}

double evaluate_loss(const ModelParams& m, const std::vector<TrainSample>& data,
                     const LossSelector& sel, double beta, int threads) {
    if (data.empty()) throw std::invalid_argument("evaluate_loss: empty dataset");
    std::vector<double> losses(data.size(), 0.0);
    parallel_for(static_cast<int>(data.size()), threads, [&](int i) {
        const double npix = static_cast<double>(data[i].image.h) * data[i].image.w;
        losses[i] = compute_loss(m, data[i], sel, beta) / npix;
    });
    double total = 0.0;
    for (double l : losses) total += l;
    return total / static_cast<double>(data.size());
}

ModelParams train_greedy_phase(ModelParams m, const std::vector<TrainSample>& data,
                               const TrainConfig& cfg, int k, std::ostream* progress) {
    cfg.validate();
    const std::string label = "greedy k=" + std::to_string(k + 1);
    run_phase(m, data, cfg, LossSelector::side(k), cfg.iters_greedy,
              0xA100 + static_cast<std::uint64_t>(k), label.c_str(), progress);
    return m;
}

ModelParams train_stage_greedy(ModelParams m, const std::vector<TrainSample>& data,
                               const TrainConfig& cfg, std::ostream* progress) {
    cfg.validate();
    for (int k = 0; k < m.n_stages(); ++k)
        m = train_greedy_phase(std::move(m), data, cfg, k, progress);
    return m;
}

ModelParams train_stage_scale(ModelParams m, const std::vector<TrainSample>& data,
                              const TrainConfig& cfg, std::ostream* progress) {
    cfg.validate();
    run_phase(m, data, cfg, LossSelector::scale(0), cfg.iters_scale, 0xB200, "scale", progress);
    return m;
}

ModelParams train_stage_multiscale(ModelParams m, const std::vector<TrainSample>& data,
                                   const TrainConfig& cfg, std::ostream* progress) {
    cfg.validate();
    // warm-start the coarser scales from the trained scale-1 heads
    for (int s = 1; s < m.n_scales(); ++s) {
        m.side[s] = m.side[0];
        m.w_fuse[s] = m.w_fuse[0];
    }
    m.learnable_up = true;
    run_phase(m, data, cfg, LossSelector::full(), cfg.iters_fuse, 0xC300, "fuse", progress);
    return m;
}

ModelParams train_full(const std::vector<TrainSample>& data, const TrainConfig& cfg,
                       std::ostream* progress) {
    cfg.validate();
    ModelParams m = make_model(cfg.net, cfg.seed);
    m = train_stage_greedy(std::move(m), data, cfg, progress);
    m = train_stage_scale(std::move(m), data, cfg, progress);
    m = train_stage_multiscale(std::move(m), data, cfg, progress);
    return m;
}

double grad_check(const ModelParams& m, const TrainSample& sample, const LossSelector& sel,
                  double beta, double eps, int threads) {
    check_selector(m, sel);
    ModelParams analytic = zeros_like(m);
    compute_loss_and_grads(m, sample, sel, beta, analytic);

    ModelParams probe = m;
    const auto blocks = update_set_blocks(probe, sel);
    const auto grad_blocks = update_set_blocks(analytic, sel);

    struct Slot {
        int block;
        std::size_t offset;
    };
    std::vector<Slot> slots;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t i = 0; i < blocks[b].data->size(); ++i)
            slots.push_back({static_cast<int>(b), i});

    const int workers = resolve_threads(threads);
    std::vector<double> errs(slots.size(), 0.0);
    parallel_for(workers, workers, [&](int t) {
        ModelParams local = m;
        auto local_blocks = update_set_blocks(local, sel);
        const std::size_t lo = slots.size() * static_cast<std::size_t>(t) / workers;
        const std::size_t hi = slots.size() * (static_cast<std::size_t>(t) + 1) / workers;
        for (std::size_t si = lo; si < hi; ++si) {
            auto& vec = *local_blocks[slots[si].block].data;
            const std::size_t off = slots[si].offset;
            const double saved = vec[off];
            vec[off] = saved + eps;
            const double lp = compute_loss(local, sample, sel, beta);
            vec[off] = saved - eps;
            const double lm = compute_loss(local, sample, sel, beta);
            vec[off] = saved;
            const double numeric = (lp - lm) / (2.0 * eps);
            const double a = (*grad_blocks[slots[si].block].data)[off];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
            errs[si] = std::abs(a - numeric) / denom;
        }
    });

    double worst = 0.0;
    for (double e : errs) worst = std::max(worst, e);
    return worst;
}

}  // namespace bdet
