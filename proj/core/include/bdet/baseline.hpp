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

#include "bdet/grid.hpp"
#include "bdet/tensor.hpp"

namespace bdet {

/// Gradient-magnitude reference detector: per-channel Sobel, L2 magnitude
/// accumulated over channels, normalized by the image max into [0, 1].
SoftBoundaryMap sobel_magnitude(const Tensor& rgb);

}  // namespace bdet
