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

#pragma once

#include <cstdint>
#include <vector>

#include "bdet/conv.hpp"
#include "bdet/grid.hpp"
#include "bdet/tensor.hpp"

namespace bdet {

/// Architecture of the shared trunk and the scale pyramid.
struct NetConfig {
    int in_channels = 3;
    std::vector<int> stage_widths = {8, 16, 32};  // channels per stage
    int convs_per_stage = 2;                      // 3x3 conv + relu each
    std::vector<double> scales = {1.0, 0.8, 0.5};
    void validate() const;
};

/// Per-(scale, stage) side head: 1x1 feature fusion plus the learned (or
/// frozen bilinear) upsampling kernel back to that scale's resolution.
struct SideHead {
    std::vector<double> w_feat;  // [d_k], no bias
    std::vector<double> w_up;    // [k*k] transposed-conv kernel
    int up_factor = 1;           // 2^(stage index)
};

/// Convolution stages; a 2x2 max-pool follows every stage except the last.
struct Stage {
    std::vector<ConvLayer> convs;
};

struct BaseNet {
    int in_channels = 3;
    std::vector<Stage> stages;
    int n_stages() const { return static_cast<int>(stages.size()); }
};

/// Full parameter set. side[s][k] pairs with w_fuse[s][k]; w_scale weights
/// the per-scale activations in the final fusion. scales[0] must be 1.
struct ModelParams {
    BaseNet base;
    std::vector<std::vector<SideHead>> side;    // [scale][stage]
    std::vector<std::vector<double>> w_fuse;    // [scale][stage]
    std::vector<double> w_scale;                // [scale]
    std::vector<double> scales;                 // resize factors
    bool learnable_up = false;                  // stage C turns this on

    int n_stages() const { return base.n_stages(); }
    int n_scales() const { return static_cast<int>(scales.size()); }
};

/// He-initialized trunk and feature weights, bilinear upsampling kernels,
/// w_fuse = 1/K, w_scale = 1/|S|. Deterministic in the seed.
ModelParams make_model(const NetConfig& cfg, std::uint64_t seed);

/// A model view with the scale pyramid collapsed to {1.0} and unit fusion
/// weight; shares no state with the input (copies scale-1 heads).
ModelParams single_scale_view(const ModelParams& m);

/// Per-stage forward bookkeeping needed by backprop.
struct StageTrace {
    std::vector<Tensor> pre;    // conv outputs before relu
    std::vector<Tensor> post;   // after relu
    Tensor pooled;              // empty for the last stage
    std::vector<std::size_t> pool_argmax;
};

struct ScaleTrace {
    Tensor image;                  // rescaled input
    std::vector<StageTrace> stages;
    std::vector<Tensor> taps;      // stage features feeding the side heads
    std::vector<Tensor> side;      // 1-channel maps, stage resolution
    std::vector<Tensor> side_up;   // upsampled to this scale's resolution
    Tensor activation;             // sum_k w_fuse[k] * side_up[k]
    Tensor activation_base;        // resampled to the scale-1 grid
};

/// Runs the trunk on one rescaled image and returns the per-stage feature
/// taps (each stage's last relu output, before pooling). Stage k has spatial
/// dims ceil(input / 2^k). Pass a trace to keep what backprop needs.
std::vector<Tensor> forward_base(const BaseNet& base, const Tensor& x, StageTrace* traces = nullptr,
                                 int n_stages = -1);

/// 1x1 combination of a stage tap into a single channel: w_feat^T f(i).
Tensor side_feature(const Tensor& tap, const SideHead& head);

/// Upsamples a side map back to (target_h, target_w) with the head's kernel.
Tensor upsample_side(const Tensor& side, const SideHead& head, int target_h, int target_w);

/// Linear fusion of the K upsampled side maps of one scale.
Tensor scale_activation(const std::vector<Tensor>& side_up, const std::vector<double>& w_fuse);

/// sigma(sum_s w_scale[s] * activations[s]); inputs must share the base grid.
SoftBoundaryMap multiscale_fuse(const std::vector<Tensor>& activations,
                                const std::vector<double>& w_scale);

/// Forward pass of one scale (trunk + heads); n_stages < 0 means all.
ScaleTrace forward_scale(const ModelParams& m, const Tensor& image, int scale_idx,
                         int base_h, int base_w, int n_stages = -1);

/// Full pyramid forward: resize, per-scale activations, Eq-style fusion.
struct ForwardResult {
    std::vector<ScaleTrace> scales;
    Tensor fused;        // pre-sigmoid, base grid
    Tensor prob;         // sigmoid(fused)
};
ForwardResult forward_full(const ModelParams& m, const Tensor& image);

/// Boundary confidence map for an image (values strictly inside (0, 1)).
SoftBoundaryMap predict(const ModelParams& m, const Tensor& image);

/// The collapsed |S| = 1 path: sigma of the scale-1 activation.
SoftBoundaryMap predict_single_scale(const ModelParams& m, const Tensor& image);

double sigmoid(double x);

}  // namespace bdet
