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
#include <utility>
#include <vector>

#include "bdet/grid.hpp"

namespace bdet {

struct MatchResult {
    std::vector<std::pair<Point, Point>> matched_pairs;  // (pred pixel, gt pixel)
    std::int64_t n_pred = 0;
    std::int64_t n_gt = 0;
};

/// Maximum-cardinality one-to-one matching between the set pixels of pred
/// and gt, subject to Euclidean distance <= d_max (inclusive). Candidate
/// pairs come from a spatial-bin pass; augmenting paths (Hopcroft-Karp)
/// make the cardinality exact. Throws std::invalid_argument on dimension
/// mismatch or d_max <= 0.
MatchResult correspond(const BoundaryMap& pred, const BoundaryMap& gt, double d_max);

/// Benchmark-convention tolerance radius: 0.0075 x image diagonal.
double default_d_max(int width, int height);

}  // namespace bdet
