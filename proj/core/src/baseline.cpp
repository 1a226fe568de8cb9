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

#include "bdet/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace bdet {

SoftBoundaryMap sobel_magnitude(const Tensor& rgb) {
    const int w = rgb.w, h = rgb.h;
    SoftBoundaryMap out(w, h, 0.0);

    const auto sample = [&](int c, int x, int y) {
        return rgb.at(c, std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1));
    };

    double peak = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double mag2 = 0.0;
            for (int c = 0; c < rgb.c; ++c) {
                const double gx = sample(c, x + 1, y - 1) - sample(c, x - 1, y - 1) +
                                  2.0 * (sample(c, x + 1, y) - sample(c, x - 1, y)) +
                                  sample(c, x + 1, y + 1) - sample(c, x - 1, y + 1);
                const double gy = sample(c, x - 1, y + 1) - sample(c, x - 1, y - 1) +
                                  2.0 * (sample(c, x, y + 1) - sample(c, x, y - 1)) +
                                  sample(c, x + 1, y + 1) - sample(c, x + 1, y - 1);
                mag2 += gx * gx + gy * gy;
            }
            const double m = std::sqrt(mag2);
            out(x, y) = m;
            peak = std::max(peak, m);
        }
    }
    if (peak > 0.0)
        for (auto& v : out.data()) v /= peak;
    return out;
}

}  // namespace bdet
