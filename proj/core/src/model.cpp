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

#include "bdet/model.hpp"

#include <cmath>
#include <stdexcept>

#include "bdet/resample.hpp"
#include "bdet/rng.hpp"

namespace bdet {

void NetConfig::validate() const {
    if (in_channels < 1) throw std::invalid_argument("NetConfig: in_channels must be >= 1");
    if (stage_widths.size() < 2) throw std::invalid_argument("NetConfig: need at least 2 stages");
    for (int w : stage_widths)
        if (w < 1) throw std::invalid_argument("NetConfig: stage widths must be >= 1");
    if (convs_per_stage < 1) throw std::invalid_argument("NetConfig: convs_per_stage must be >= 1");
    if (scales.empty() || scales.front() != 1.0)
        throw std::invalid_argument("NetConfig: scales must start with 1.0");
    for (double s : scales)
        if (!(s > 0.0) || s > 1.0)
            throw std::invalid_argument("NetConfig: scales must lie in (0, 1]");
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

ModelParams make_model(const NetConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const int n_stages = static_cast<int>(cfg.stage_widths.size());
    const int n_scales = static_cast<int>(cfg.scales.size());

    ModelParams m;
    m.scales = cfg.scales;
    m.base.in_channels = cfg.in_channels;

    Rng rng(derive_seed(seed, 0x6d6f64656cULL));  // init stream
    int prev = cfg.in_channels;
    for (int k = 0; k < n_stages; ++k) {
        Stage st;
        for (int j = 0; j < cfg.convs_per_stage; ++j) {
            ConvLayer conv(prev, cfg.stage_widths[k]);
            const double stddev = std::sqrt(2.0 / (static_cast<double>(conv.in_ch) * conv.kh * conv.kw));
            for (auto& v : conv.w) v = rng.normal(0.0, stddev);
            // biases start at zero
            st.convs.push_back(std::move(conv));
            prev = cfg.stage_widths[k];
        }
        m.base.stages.push_back(std::move(st));
    }

    m.side.resize(n_scales);
    m.w_fuse.assign(n_scales, std::vector<double>(n_stages, 1.0 / n_stages));
    for (int s = 0; s < n_scales; ++s) {
        for (int k = 0; k < n_stages; ++k) {
            SideHead head;
            head.up_factor = 1 << k;
            head.w_feat.resize(cfg.stage_widths[k]);
            const double stddev = std::sqrt(2.0 / cfg.stage_widths[k]);
            for (auto& v : head.w_feat) v = rng.normal(0.0, stddev);
            head.w_up = bilinear_upsample_kernel(head.up_factor);
            m.side[s].push_back(std::move(head));
        }
    }
    m.w_scale.assign(n_scales, 1.0 / n_scales);
    return m;
}

ModelParams single_scale_view(const ModelParams& m) {
    ModelParams v;
    v.base = m.base;
    v.side = {m.side.at(0)};
    v.w_fuse = {m.w_fuse.at(0)};
    v.w_scale = {1.0};
    v.scales = {1.0};
    v.learnable_up = m.learnable_up;
    return v;
}

std::vector<Tensor> forward_base(const BaseNet& base, const Tensor& x, StageTrace* traces,
                                 int n_stages) {
    if (x.c != base.in_channels)
        throw std::invalid_argument("forward_base: input channel mismatch");
    const int limit = n_stages < 0 ? base.n_stages() : n_stages;
    if (limit < 1 || limit > base.n_stages())
        throw std::invalid_argument("forward_base: bad stage limit");

    std::vector<Tensor> taps;
    Tensor cur = x;
    for (int k = 0; k < limit; ++k) {
        StageTrace* tr = traces ? &traces[k] : nullptr;
        for (const ConvLayer& conv : base.stages[k].convs) {
            Tensor pre = conv2d_same(conv, cur);
            Tensor post = relu(pre);
            if (tr) {
                tr->pre.push_back(pre);
                tr->post.push_back(post);
            }
            cur = std::move(post);
        }
        taps.push_back(cur);
        if (k + 1 < base.n_stages()) {
            std::vector<std::size_t> argmax;
            Tensor pooled = maxpool2(cur, &argmax);
            if (tr) {
                tr->pooled = pooled;
                tr->pool_argmax = std::move(argmax);
            }
            cur = std::move(pooled);
        }
    }
    return taps;
}

Tensor side_feature(const Tensor& tap, const SideHead& head) {
    if (tap.c != static_cast<int>(head.w_feat.size()))
        throw std::invalid_argument("side_feature: channel mismatch");
    Tensor out(1, tap.h, tap.w);
    for (int c = 0; c < tap.c; ++c) {
        const double wc = head.w_feat[c];
        auto src = tap.channel(c);
        for (std::size_t i = 0; i < src.size(); ++i) out.v[i] += wc * src[i];
    }
    return out;
}

Tensor upsample_side(const Tensor& side, const SideHead& head, int target_h, int target_w) {
    return upsample_transposed(side, head.up_factor, head.w_up, target_h, target_w);
}

Tensor scale_activation(const std::vector<Tensor>& side_up, const std::vector<double>& w_fuse) {
    if (side_up.empty() || side_up.size() != w_fuse.size())
        throw std::invalid_argument("scale_activation: fusion weight count mismatch");
    for (const auto& t : side_up)
        if (!t.same_dims(side_up.front()))
            throw std::invalid_argument("scale_activation: side map dims differ");
    Tensor out(1, side_up.front().h, side_up.front().w);
    for (std::size_t k = 0; k < side_up.size(); ++k) {
        const double wk = w_fuse[k];
        for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += wk * side_up[k].v[i];
    }
    return out;
}

SoftBoundaryMap multiscale_fuse(const std::vector<Tensor>& activations,
                                const std::vector<double>& w_scale) {
    if (activations.empty() || activations.size() != w_scale.size())
        throw std::invalid_argument("multiscale_fuse: scale weight count mismatch");
    for (const auto& t : activations)
        if (!t.same_dims(activations.front()))
            throw std::invalid_argument("multiscale_fuse: activation grids differ");
    const Tensor& first = activations.front();
    SoftBoundaryMap out(first.w, first.h);
    for (int y = 0; y < first.h; ++y) {
        for (int x = 0; x < first.w; ++x) {
            double a = 0.0;
            for (std::size_t s = 0; s < activations.size(); ++s)
                a += w_scale[s] * activations[s].at(0, y, x);
            out(x, y) = sigmoid(a);
        }
    }
    return out;
}

ScaleTrace forward_scale(const ModelParams& m, const Tensor& image, int scale_idx,
                         int base_h, int base_w, int n_stages) {
    const double factor = m.scales.at(scale_idx);
    const int limit = n_stages < 0 ? m.n_stages() : n_stages;

    ScaleTrace tr;
    tr.image = resize_bilinear(image, scaled_dim(base_h, factor), scaled_dim(base_w, factor));
    tr.stages.resize(m.n_stages());
    tr.taps = forward_base(m.base, tr.image, tr.stages.data(), limit);

    for (int k = 0; k < limit; ++k) {
        const SideHead& head = m.side[scale_idx][k];
        Tensor side = side_feature(tr.taps[k], head);
        Tensor up = upsample_side(side, head, tr.image.h, tr.image.w);
        tr.side.push_back(std::move(side));
        tr.side_up.push_back(std::move(up));
    }
    if (limit == m.n_stages()) {
        tr.activation = scale_activation(tr.side_up, m.w_fuse[scale_idx]);
        tr.activation_base = resize_bilinear(tr.activation, base_h, base_w);
    }
    return tr;
}

ForwardResult forward_full(const ModelParams& m, const Tensor& image) {
    ForwardResult res;
    res.scales.reserve(m.scales.size());
    for (int s = 0; s < m.n_scales(); ++s)
        res.scales.push_back(forward_scale(m, image, s, image.h, image.w));

    res.fused = Tensor(1, image.h, image.w);
    for (int s = 0; s < m.n_scales(); ++s) {
        const double ws = m.w_scale[s];
        const Tensor& a = res.scales[s].activation_base;
        for (std::size_t i = 0; i < res.fused.v.size(); ++i) res.fused.v[i] += ws * a.v[i];
    }
    res.prob = res.fused;
    for (auto& v : res.prob.v) v = sigmoid(v);
    return res;
}

SoftBoundaryMap predict(const ModelParams& m, const Tensor& image) {
    const ForwardResult res = forward_full(m, image);
    SoftBoundaryMap out(image.w, image.h);
    for (int y = 0; y < image.h; ++y)
        for (int x = 0; x < image.w; ++x) out(x, y) = res.prob.at(0, y, x);
    return out;
}

SoftBoundaryMap predict_single_scale(const ModelParams& m, const Tensor& image) {
    const ScaleTrace tr = forward_scale(m, image, 0, image.h, image.w);
    SoftBoundaryMap out(image.w, image.h);
    for (int y = 0; y < image.h; ++y)
        for (int x = 0; x < image.w; ++x) out(x, y) = sigmoid(tr.activation.at(0, y, x));
    return out;
}

Tensor to_tensor(const SoftBoundaryMap& m) {
    Tensor t(1, m.height(), m.width());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) t.at(0, y, x) = m(x, y);
    return t;
}

SoftBoundaryMap to_soft_map(const Tensor& t) {
    if (t.c != 1) throw std::invalid_argument("to_soft_map: expects 1 channel");
    SoftBoundaryMap m(t.w, t.h);
    for (int y = 0; y < t.h; ++y)
        for (int x = 0; x < t.w; ++x) m(x, y) = t.at(0, y, x);
    return m;
}

}  // namespace bdet
