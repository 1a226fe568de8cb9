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

#include <vector>

#include "bdet/tensor.hpp"

namespace bdet {

/// Stride-1, zero-padded (same) convolution layer with odd kernels.
struct ConvLayer {
    int in_ch = 0;
    int out_ch = 0;
    int kh = 3;
    int kw = 3;
    std::vector<double> w;  // [out][in][kh][kw]
    std::vector<double> b;  // [out]

    ConvLayer() = default;
    ConvLayer(int in_channels, int out_channels, int kernel_h = 3, int kernel_w = 3);

    double& wat(int o, int i, int dy, int dx) {
        return w[((static_cast<std::size_t>(o) * in_ch + i) * kh + dy) * kw + dx];
    }
    double wat(int o, int i, int dy, int dx) const {
        return w[((static_cast<std::size_t>(o) * in_ch + i) * kh + dy) * kw + dx];
    }
};

Tensor conv2d_same(const ConvLayer& layer, const Tensor& in);

/// Accumulates into the provided gradient buffers; any of them may be null.
void conv2d_same_backward(const ConvLayer& layer, const Tensor& in, const Tensor& g_out,
                          Tensor* g_in, std::vector<double>* g_w, std::vector<double>* g_b);

Tensor relu(const Tensor& in);
/// g_in(i) = g_out(i) * [pre(i) > 0]
Tensor relu_backward(const Tensor& pre, const Tensor& g_out);

/// 2x2 stride-2 max pooling, ceil mode (bottom/right windows may be
/// partial). argmax records the flat input index feeding each output cell.
Tensor maxpool2(const Tensor& in, std::vector<std::size_t>* argmax);
Tensor maxpool2_backward(const Tensor& in, const Tensor& g_out,
                         const std::vector<std::size_t>& argmax);

}  // namespace bdet
