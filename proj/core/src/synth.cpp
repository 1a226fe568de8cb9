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

#include "bdet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bdet/rng.hpp"

namespace bdet {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

struct Shape {
    bool is_ellipse = true;
    std::uint16_t category = 1;
    std::uint16_t instance = 1;
    // ellipse
    double cx = 0, cy = 0, a = 1, b = 1, cos_t = 1, sin_t = 0;
    // polygon (star-shaped around the center)
    std::vector<double> vx, vy;

    bool contains(double px, double py) const {
        if (is_ellipse) {
            const double dx = px - cx, dy = py - cy;
            const double u = dx * cos_t + dy * sin_t;
            const double v = -dx * sin_t + dy * cos_t;
            return (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
        }
        // even-odd crossing test
        bool inside = false;
        const std::size_t n = vx.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            if ((vy[i] > py) != (vy[j] > py)) {
                const double t = (py - vy[i]) / (vy[j] - vy[i]);
                if (px < vx[i] + t * (vx[j] - vx[i])) inside = !inside;
            }
        }
        return inside;
    }
};

// stable color for a category id (shared across scenes and seeds)
void category_color(std::uint16_t cat, double rgb[3]) {
    const std::uint64_t h = splitmix64(0x636f6c6f72ULL ^ (std::uint64_t(cat) + 1));
    rgb[0] = 0.15 + 0.70 * static_cast<double>((h >> 0) & 0xffff) / 65535.0;
    rgb[1] = 0.15 + 0.70 * static_cast<double>((h >> 16) & 0xffff) / 65535.0;
    rgb[2] = 0.15 + 0.70 * static_cast<double>((h >> 32) & 0xffff) / 65535.0;
}

// quantized per-instance shading so touching same-category instances
// usually differ in brightness
double instance_shade(std::uint64_t scene_seed, std::uint16_t instance) {
    const std::uint64_t h = splitmix64(scene_seed ^ (0x73686164ULL + instance));
    return 0.70 + 0.08 * static_cast<double>(h % 8);
}

}  // namespace

void SynthSpec::validate() const {
    if (width < 8 || height < 8)
        throw std::invalid_argument("SynthSpec: degenerate scene dimensions");
    if (n_shapes < 0) throw std::invalid_argument("SynthSpec: n_shapes must be >= 0");
    if (n_categories < 2) throw std::invalid_argument("SynthSpec: need >= 2 categories");
    if (n_categories > 65535) throw std::invalid_argument("SynthSpec: category ids exceed 16 bits");
    if (!ellipses && !polygons)
        throw std::invalid_argument("SynthSpec: enable at least one shape kind");
    if (min_size < 2 || max_size < min_size)
        throw std::invalid_argument("SynthSpec: bad size range");
    if (noise_sigma < 0.0) throw std::invalid_argument("SynthSpec: negative noise");
}

Scene synth_scene(const SynthSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, 0x7363656e65ULL));

    std::vector<Shape> shapes;
    shapes.reserve(spec.n_shapes);
    for (int i = 0; i < spec.n_shapes; ++i) {
        Shape s;
        if (spec.ellipses && spec.polygons)
            s.is_ellipse = rng.uniform_int(0, 1) == 0;
        else
            s.is_ellipse = spec.ellipses;
        s.category = static_cast<std::uint16_t>(rng.uniform_int(1, spec.n_categories - 1));
        s.instance = static_cast<std::uint16_t>(i + 1);
        const double cx = rng.uniform(0.0, spec.width);
        const double cy = rng.uniform(0.0, spec.height);
        if (s.is_ellipse) {
            s.cx = cx;
            s.cy = cy;
            s.a = rng.uniform(spec.min_size, spec.max_size) / 2.0;
            s.b = rng.uniform(spec.min_size, spec.max_size) / 2.0;
            const double theta = rng.uniform(0.0, kTau / 2.0);
            s.cos_t = std::cos(theta);
            s.sin_t = std::sin(theta);
        } else {
            const int k = static_cast<int>(rng.uniform_int(3, 7));
            std::vector<double> angles(k);
            for (auto& a : angles) a = rng.uniform(0.0, kTau);
            std::sort(angles.begin(), angles.end());
            for (double a : angles) {
                const double r = rng.uniform(spec.min_size, spec.max_size) / 2.0;
                s.vx.push_back(cx + r * std::cos(a));
                s.vy.push_back(cy + r * std::sin(a));
            }
        }
        shapes.push_back(std::move(s));
    }

    Scene scene;
    scene.labels = LabelMap(spec.width, spec.height);
    for (auto& v : scene.labels.category.data()) v = 0;
    for (auto& v : scene.labels.instance.data()) v = 0;
    for (const Shape& s : shapes) {
        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                if (s.contains(x + 0.5, y + 0.5)) {
                    scene.labels.category(x, y) = s.category;
                    scene.labels.instance(x, y) = s.instance;
                }
            }
        }
    }

    scene.image = Tensor(3, spec.height, spec.width);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            double rgb[3];
            category_color(scene.labels.category(x, y), rgb);
            const double shade = instance_shade(spec.seed, scene.labels.instance(x, y));
            for (int c = 0; c < 3; ++c) {
                const double noisy = rgb[c] * shade + rng.normal(0.0, spec.noise_sigma);
                scene.image.at(c, y, x) = std::clamp(noisy, 0.0, 1.0);
            }
        }
    }
    return scene;
}

}  // namespace bdet
