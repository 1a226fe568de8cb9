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

#include <filesystem>

#include "bdet/grid.hpp"
#include "bdet/label_map.hpp"
#include "bdet/tensor.hpp"

namespace bdet {

/// LabelMap on disk: two 16-bit grayscale PNGs, <stem>.cat.png and
/// <stem>.inst.png, equal dimensions.
void save_label_map(const LabelMap& lm, const std::filesystem::path& stem);
LabelMap load_label_map(const std::filesystem::path& stem);

/// BoundaryMap: 8-bit grayscale, 0 = off, 255 = boundary; any nonzero
/// value loads as set.
void save_boundary_map(const BoundaryMap& bm, const std::filesystem::path& path);
BoundaryMap load_boundary_map(const std::filesystem::path& path);

/// SoftBoundaryMap: 8-bit grayscale, value/255; quantization changes a
/// stored confidence by at most 1/510.
void save_soft_map(const SoftBoundaryMap& sm, const std::filesystem::path& path);
SoftBoundaryMap load_soft_map(const std::filesystem::path& path);

/// RGB images: 8-bit PNG; tensors carry channel-planar doubles in [0, 1].
void save_image_rgb(const Tensor& img, const std::filesystem::path& path);
Tensor load_image_rgb(const std::filesystem::path& path);

}  // namespace bdet
