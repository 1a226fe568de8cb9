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

/// Probabilities are clamped to [kProbEps, 1 - kProbEps] before any log.
inline constexpr double kProbEps = 1e-12;

/// Class-balanced cross entropy, summed over pixels:
///   -beta * sum_{y=1} log p  -  (1 - beta) * sum_{y=0} log(1 - p)
double weighted_bce(const Tensor& prob, const BoundaryMap& gt, double beta);
double weighted_bce(const SoftBoundaryMap& prob, const BoundaryMap& gt, double beta);

/// d(loss)/d(activation) for prob = sigmoid(activation), evaluated on the
/// clamped probability (zero where the clamp is active).
Tensor weighted_bce_grad_activation(const Tensor& prob, const BoundaryMap& gt, double beta);

}  // namespace bdet
