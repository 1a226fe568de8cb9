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

#include "bdet/grid.hpp"
#include "bdet/label_map.hpp"

namespace bdet {

enum class Connectivity { four, eight };

/// Marks every pixel with at least one neighbor carrying a different
/// (category, instance) pair. Both sides of a label interface are marked,
/// so a straight interface produces a two-pixel-wide band.
BoundaryMap extract_boundaries(const LabelMap& lm, Connectivity conn = Connectivity::four);

/// Topology-preserving thinning to one-pixel width. Two-subiteration
/// directional marking with per-deletion simple-point checks, plus a final
/// sweep that clears leftover 2x2 blocks through simple deletions only.
/// Output pixels are a subset of the input; 8-connected foreground
/// components and background holes keep their counts.
BoundaryMap thin(const BoundaryMap& bm);

/// Top-left coordinates of all 2x2 windows whose four pixels carry three or
/// more distinct (category, instance) labels, in raster order.
std::vector<Point> detect_junctions(const LabelMap& lm);

/// Set-pixel count divided by total pixel count.
double boundary_pixel_fraction(const BoundaryMap& bm);

/// One row of the boundary-length-by-category-pair table. cat_a <= cat_b;
/// cat_a == cat_b records instance boundaries inside one category.
struct PairLength {
    std::uint16_t cat_a = 0;
    std::uint16_t cat_b = 0;
    std::int64_t length = 0;
    friend bool operator==(const PairLength&, const PairLength&) = default;
};
using PairLengthTable = std::vector<PairLength>;

/// Counts adjacent pixel pairs whose labels differ, keyed by unordered
/// category pair, sorted by descending length (ties by ascending pair).
/// Equal-category pairs with differing instances land in the (c, c) row.
PairLengthTable category_pair_lengths(const LabelMap& lm, Connectivity conn = Connectivity::four);

}  // namespace bdet
