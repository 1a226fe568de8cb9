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

#include "bdet/scoring.hpp"

#include <algorithm>
#include <stdexcept>

#include "bdet/boundary.hpp"
#include "bdet/matching.hpp"

namespace bdet {

namespace {

PRPoint make_point(double t, std::int64_t tp_pred, std::int64_t n_pred,
                   std::int64_t tp_gt, std::int64_t n_gt) {
    PRPoint pt;
    pt.threshold = t;
    pt.tp_pred = tp_pred;
    pt.n_pred = n_pred;
    pt.tp_gt = tp_gt;
    pt.n_gt = n_gt;
    pt.precision = n_pred > 0 ? static_cast<double>(tp_pred) / static_cast<double>(n_pred) : 1.0;
    pt.recall = n_gt > 0 ? static_cast<double>(tp_gt) / static_cast<double>(n_gt) : 1.0;
    pt.f = f_measure(pt.precision, pt.recall);
    return pt;
}

}  // namespace

double f_measure(double p, double r) {
    if (p + r <= 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

std::vector<double> default_thresholds(int n) {
    if (n < 1) throw std::invalid_argument("default_thresholds: n must be >= 1");
    std::vector<double> t(n);
    for (int k = 1; k <= n; ++k) t[k - 1] = static_cast<double>(k) / (n + 1);
    return t;
}

BoundaryMap binarize_and_thin(const SoftBoundaryMap& soft, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("binarize_and_thin: threshold outside [0,1]");
    BoundaryMap mask(soft.width(), soft.height(), 0);
    for (int y = 0; y < soft.height(); ++y)
        for (int x = 0; x < soft.width(); ++x)
            mask(x, y) = soft(x, y) >= t ? 1 : 0;
    return thin(mask);
}

std::vector<PRPoint> evaluate_image(const SoftBoundaryMap& soft, const BoundaryMap& gt,
                                    const std::vector<double>& thresholds, double d_max) {
    if (soft.width() != gt.width() || soft.height() != gt.height())
        throw std::invalid_argument("evaluate_image: prediction/gt dimension mismatch");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < 0.0 || thresholds[i] > 1.0 ||
            (i > 0 && thresholds[i] <= thresholds[i - 1]))
            throw std::invalid_argument("evaluate_image: thresholds must be strictly increasing in [0,1]");
    }

    std::vector<PRPoint> out;
    out.reserve(thresholds.size());
    for (const double t : thresholds) {
        const BoundaryMap pred = binarize_and_thin(soft, t);
        const MatchResult m = correspond(pred, gt, d_max);
        const auto tp = static_cast<std::int64_t>(m.matched_pairs.size());
        out.push_back(make_point(t, tp, m.n_pred, tp, m.n_gt));
    }
    return out;
}

BenchmarkSummary aggregate(const std::vector<std::vector<PRPoint>>& per_image) {
    if (per_image.empty())
        throw std::invalid_argument("aggregate: no per-image results");
    const std::size_t n_thresh = per_image.front().size();
    if (n_thresh == 0)
        throw std::invalid_argument("aggregate: empty threshold sweep");
    for (const auto& img : per_image) {
        if (img.size() != n_thresh)
            throw std::invalid_argument("aggregate: images evaluated on different threshold grids");
        for (std::size_t i = 0; i < n_thresh; ++i)
            if (img[i].threshold != per_image.front()[i].threshold)
                throw std::invalid_argument("aggregate: images evaluated on different threshold grids");
    }

    BenchmarkSummary s;
    s.curve.reserve(n_thresh);
    for (std::size_t i = 0; i < n_thresh; ++i) {
        std::int64_t tp_pred = 0, n_pred = 0, tp_gt = 0, n_gt = 0;
        for (const auto& img : per_image) {
            tp_pred += img[i].tp_pred;
            n_pred += img[i].n_pred;
            tp_gt += img[i].tp_gt;
            n_gt += img[i].n_gt;
        }
        s.curve.push_back(make_point(per_image.front()[i].threshold, tp_pred, n_pred, tp_gt, n_gt));
    }

    // ODS: one threshold for the whole dataset.
    std::size_t best = 0;
    for (std::size_t i = 1; i < n_thresh; ++i)
        if (s.curve[i].f > s.curve[best].f) best = i;
    s.ods_f = s.curve[best].f;
    s.ods_threshold = s.curve[best].threshold;

    // OIS: per-image best threshold, counts summed at each image's pick.
    std::int64_t tp_pred = 0, n_pred = 0, tp_gt = 0, n_gt = 0;
    for (const auto& img : per_image) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < n_thresh; ++i)
            if (img[i].f > img[pick].f) pick = i;
        tp_pred += img[pick].tp_pred;
        n_pred += img[pick].n_pred;
        tp_gt += img[pick].tp_gt;
        n_gt += img[pick].n_gt;
    }
    const PRPoint ois = make_point(0.0, tp_pred, n_pred, tp_gt, n_gt);
    s.ois_f = ois.f;

    // AP over the aggregated curve: precision interpolated as the running
    // max over recall >= r, sampled at 101 uniform recall levels.
    double ap = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double r = static_cast<double>(k) / 100.0;
        double p_best = 0.0;
        for (const auto& pt : s.curve)
            if (pt.recall >= r) p_best = std::max(p_best, pt.precision);
        ap += p_best;
    }
    s.ap = ap / 101.0;
    return s;
}

}  // namespace bdet
