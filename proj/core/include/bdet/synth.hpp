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

#include "bdet/label_map.hpp"
#include "bdet/tensor.hpp"

namespace bdet {

/// Deterministic synthetic-scene recipe: shapes are fully determined by the
/// seed; category 0 is the background.
struct SynthSpec {
    std::uint64_t seed = 1;
    int width = 64;
    int height = 64;
    int n_shapes = 4;
    int n_categories = 6;  // including background
    bool ellipses = true;
    bool polygons = true;
    int min_size = 12;  // shape bounding diameter, pixels
    int max_size = 30;
    double noise_sigma = 0.02;

    void validate() const;
};

struct Scene {
    Tensor image;  // 3 x h x w, values in [0, 1]
    LabelMap labels;
};

/// Back-to-front rasterization of seeded random ellipses/polygons over the
/// background. Pixel color = per-category base color * per-instance shading
/// + Gaussian noise. Bit-reproducible for a fixed spec.
Scene synth_scene(const SynthSpec& spec);

}  // namespace bdet
