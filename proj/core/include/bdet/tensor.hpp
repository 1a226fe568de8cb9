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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bdet/grid.hpp"

namespace bdet {

/// Dense (channels, height, width) activation/image block, row-major within
/// a channel. Batches are handled as vectors of Tensor.
struct Tensor {
    int c = 0;
    int h = 0;
    int w = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int channels, int height, int width, double fill = 0.0)
        : c(channels), h(height), w(width) {
        if (channels < 1 || height < 1 || width < 1)
            throw std::invalid_argument("Tensor: dimensions must be >= 1");
        v.assign(static_cast<std::size_t>(channels) * height * width, fill);
    }

    std::size_t size() const { return v.size(); }

    double& at(int ch, int y, int x) {
        return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }
    double at(int ch, int y, int x) const {
        return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }

    std::span<double> channel(int ch) {
        return std::span<double>(v).subspan(static_cast<std::size_t>(ch) * h * w,
                                            static_cast<std::size_t>(h) * w);
    }
    std::span<const double> channel(int ch) const {
        return std::span<const double>(v).subspan(static_cast<std::size_t>(ch) * h * w,
                                                  static_cast<std::size_t>(h) * w);
    }

    bool same_dims(const Tensor& o) const { return c == o.c && h == o.h && w == o.w; }
};

/// 1-channel tensor view of a soft map (copies).
Tensor to_tensor(const SoftBoundaryMap& m);
SoftBoundaryMap to_soft_map(const Tensor& t);

}  // namespace bdet
