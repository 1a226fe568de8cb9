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

/// Kernel side for an integer upsampling factor: 2f - (f % 2).
int upsample_kernel_size(int factor);

/// Separable bilinear interpolation weights for a transposed convolution of
/// stride `factor`, flattened [k*k]. Factor 1 gives the identity kernel.
std::vector<double> bilinear_upsample_kernel(int factor);

/// Transposed convolution of a 1-channel map with stride `factor` and the
/// given k*k kernel, zero-padded by (k - factor) / 2 and cropped top-left to
/// (target_h, target_w). factor * input dims must cover the target.
Tensor upsample_transposed(const Tensor& m, int factor, const std::vector<double>& kernel,
                           int target_h, int target_w);

/// Gradient w.r.t. the upsample input.
Tensor upsample_transposed_backward_input(const Tensor& g_out, int factor,
                                          const std::vector<double>& kernel, int in_h, int in_w);

/// Gradient w.r.t. the kernel, accumulated into g_kernel (size k*k).
void upsample_transposed_backward_kernel(const Tensor& in, const Tensor& g_out, int factor,
                                         int kernel_size, std::vector<double>& g_kernel);

/// round(factor * dim), at least 1.
int scaled_dim(int dim, double factor);

/// Channel-wise bilinear resize with half-pixel-center alignment and edge
/// clamping. Exact identity when dimensions are unchanged; exact on
/// constant inputs for any size.
Tensor resize_bilinear(const Tensor& src, int out_h, int out_w);

/// Transpose of resize_bilinear: scatters output-side gradients back to the
/// source grid.
Tensor resize_bilinear_backward(const Tensor& g_out, int in_h, int in_w);

}  // namespace bdet
