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
#include <ostream>
#include <string>
#include <vector>

#include "bdet/grid.hpp"
#include "bdet/model.hpp"

namespace bdet {

struct TrainConfig {
    NetConfig net;
    double beta = 0.9;
    int batch_size = 5;
    double learning_rate = 1e-2;
    double weight_decay = 2e-4;
    int iters_greedy = 150;  // SGD steps per trunk stage in the warm start
    int iters_scale = 400;
    int iters_fuse = 300;
    std::uint64_t seed = 1;
    int threads = 0;
    void validate() const;
};

struct TrainSample {
    Tensor image;
    BoundaryMap gt;
};

/// Which loss drives backprop, and therefore which parameters update:
///  - side_output(k):  stage-k trunk convs + the (s=1, k) side head
///  - scale_specific:  whole trunk + every s=1 side weight (incl. fusion)
///  - boundary:        all side weights, all scales, + w_scale; trunk frozen
struct LossSelector {
    enum class Kind { side_output, scale_specific, boundary };
    Kind kind = Kind::boundary;
    int index = 0;  // stage for side_output, scale for scale_specific

    static LossSelector side(int k) { return {Kind::side_output, k}; }
    static LossSelector scale(int s = 0) { return {Kind::scale_specific, s}; }
    static LossSelector full() { return {Kind::boundary, 0}; }
};

/// Named view over a model's parameter vectors, in a fixed walk order.
struct ParamBlockRef {
    std::string name;
    std::vector<double>* data = nullptr;
};
std::vector<ParamBlockRef> all_param_blocks(ModelParams& m);
std::vector<ParamBlockRef> update_set_blocks(ModelParams& m, const LossSelector& sel);

/// Zeroed parameter container shaped like m (gradient accumulator).
ModelParams zeros_like(const ModelParams& m);

/// Forward pass + loss under the selector's conditioning (sum form, Eq set).
double compute_loss(const ModelParams& m, const TrainSample& sample, const LossSelector& sel,
                    double beta);

/// Loss plus gradients for every parameter in the selector's update set;
/// everything outside the set stays zero in `grads`.
double compute_loss_and_grads(const ModelParams& m, const TrainSample& sample,
                              const LossSelector& sel, double beta, ModelParams& grads);

/// Mean per-pixel loss over a dataset (no updates); diagnostic.
double evaluate_loss(const ModelParams& m, const std::vector<TrainSample>& data,
                     const LossSelector& sel, double beta, int threads = 0);

/// One phase of the warm start: cfg.iters_greedy SGD steps on the stage-k
/// side-output loss, touching only stage k and its s=1 head.
ModelParams train_greedy_phase(ModelParams m, const std::vector<TrainSample>& data,
                               const TrainConfig& cfg, int k, std::ostream* progress = nullptr);

/// Greedy layer-by-layer warm start: for k = 1..K, SGD on the stage-k
/// side-output loss updating only that stage and its s=1 head.
ModelParams train_stage_greedy(ModelParams m, const std::vector<TrainSample>& data,
                               const TrainConfig& cfg, std::ostream* progress = nullptr);

/// Side losses off; fine-tune trunk + s=1 side weights on the scale-1 loss.
ModelParams train_stage_scale(ModelParams m, const std::vector<TrainSample>& data,
                              const TrainConfig& cfg, std::ostream* progress = nullptr);

/// Final stage: copies the trained s=1 heads to the other scales, unfreezes
/// the upsampling kernels, and trains all side + scale-fusion weights on the
/// multi-scale loss. The trunk is not touched.
ModelParams train_stage_multiscale(ModelParams m, const std::vector<TrainSample>& data,
                                   const TrainConfig& cfg, std::ostream* progress = nullptr);

/// The full three-stage schedule.
ModelParams train_full(const std::vector<TrainSample>& data, const TrainConfig& cfg,
                       std::ostream* progress = nullptr);

/// Max relative error between analytic gradients and central finite
/// differences over the selector's update set.
double grad_check(const ModelParams& m, const TrainSample& sample, const LossSelector& sel,
                  double beta, double eps = 1e-5, int threads = 0);

}  // namespace bdet
