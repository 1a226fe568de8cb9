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

#include "bdet/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdet {

namespace {

void check_dims(int pw, int ph, const BoundaryMap& gt, double beta) {
    if (pw != gt.width() || ph != gt.height())
        throw std::invalid_argument("weighted_bce: prediction/gt dimension mismatch");
    if (!(beta > 0.0) || !(beta <= 1.0))
        throw std::invalid_argument("weighted_bce: beta must lie in (0, 1]");
}

inline double clamp_prob(double p) {
    return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

double bce_sum(const double* p, const BoundaryMap& gt, double beta) {
    double pos = 0.0, neg = 0.0;
    const int w = gt.width(), h = gt.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double pc = clamp_prob(p[static_cast<std::size_t>(y) * w + x]);
            if (gt(x, y))
                pos += std::log(pc);
            else
                neg += std::log(1.0 - pc);
        }
    }
    return -beta * pos - (1.0 - beta) * neg;
}

}  // namespace

double weighted_bce(const Tensor& prob, const BoundaryMap& gt, double beta) {
    if (prob.c != 1) throw std::invalid_argument("weighted_bce: expects a 1-channel map");
    check_dims(prob.w, prob.h, gt, beta);
    return bce_sum(prob.v.data(), gt, beta);
}

double weighted_bce(const SoftBoundaryMap& prob, const BoundaryMap& gt, double beta) {
    check_dims(prob.width(), prob.height(), gt, beta);
    return bce_sum(prob.data().data(), gt, beta);
}

Tensor weighted_bce_grad_activation(const Tensor& prob, const BoundaryMap& gt, double beta) {
    if (prob.c != 1) throw std::invalid_argument("weighted_bce_grad_activation: expects 1 channel");
    check_dims(prob.w, prob.h, gt, beta);
    Tensor g(1, prob.h, prob.w);
    for (int y = 0; y < prob.h; ++y) {
        for (int x = 0; x < prob.w; ++x) {
            const double p = prob.at(0, y, x);
            double gv = 0.0;
            if (p > kProbEps && p < 1.0 - kProbEps)
                gv = gt(x, y) ? -beta * (1.0 - p) : (1.0 - beta) * p;
            g.at(0, y, x) = gv;
        }
    }
    return g;
}

}  // namespace bdet
