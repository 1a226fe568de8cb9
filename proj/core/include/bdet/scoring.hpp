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

namespace bdet {

/// Correspondence counts and derived precision/recall/F at one threshold.
struct PRPoint {
    double threshold = 0.0;
    std::int64_t tp_pred = 0;
    std::int64_t n_pred = 0;
    std::int64_t tp_gt = 0;
    std::int64_t n_gt = 0;
    double precision = 1.0;  // 1 when n_pred == 0
    double recall = 1.0;     // 1 when n_gt == 0
    double f = 0.0;
};

struct BenchmarkSummary {
    std::vector<PRPoint> curve;  // dataset-aggregated, one per threshold
    double ods_f = 0.0;
    double ods_threshold = 0.0;
    double ois_f = 0.0;
    double ap = 0.0;
};

/// 2pr/(p+r); 0 when p + r == 0.
double f_measure(double p, double r);

/// Uniform threshold grid k/(n+1), k = 1..n; n = 99 gives 0.01..0.99.
std::vector<double> default_thresholds(int n = 99);

/// mask(p) = confidence(p) >= t, then thinned.
BoundaryMap binarize_and_thin(const SoftBoundaryMap& soft, double t);

/// Sweeps thresholds over one image: binarize, thin, correspond against the
/// (already thinned) ground truth, and record counts. Thresholds must be
/// strictly increasing, in [0, 1].
std::vector<PRPoint> evaluate_image(const SoftBoundaryMap& soft, const BoundaryMap& gt,
                                    const std::vector<double>& thresholds, double d_max);

/// Dataset aggregation. ODS picks the best threshold on summed counts; OIS
/// sums counts at each image's own best threshold; AP averages
/// running-max-interpolated precision over recall samples 0.00, 0.01, .., 1.00
/// (unattained recall levels contribute 0). Ties on F resolve to the lowest
/// threshold. Throws std::invalid_argument on empty input or threshold grids
/// that differ across images.
BenchmarkSummary aggregate(const std::vector<std::vector<PRPoint>>& per_image);

}  // namespace bdet
