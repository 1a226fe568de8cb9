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

#include "bdet/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdet {

namespace {

void check_factor(int factor) {
    if (factor < 1 || (factor & (factor - 1)) != 0)
        throw std::invalid_argument("upsample: factor must be a positive power of two");
}

}  // namespace

int upsample_kernel_size(int factor) {
    check_factor(factor);
    return 2 * factor - factor % 2;
}

std::vector<double> bilinear_upsample_kernel(int factor) {
    const int k = upsample_kernel_size(factor);
    // classic FCN deconvolution initializer
    const double center = (k % 2 == 1) ? (k + 1) / 2 - 1 : (k + 1) / 2 - 0.5;
    const double denom = (k + 1) / 2;
    std::vector<double> ker(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double wy = 1.0 - std::abs(i - center) / denom;
            const double wx = 1.0 - std::abs(j - center) / denom;
            ker[static_cast<std::size_t>(i) * k + j] = wy * wx;
        }
    }
    return ker;
}

Tensor upsample_transposed(const Tensor& m, int factor, const std::vector<double>& kernel,
                           int target_h, int target_w) {
    check_factor(factor);
    if (m.c != 1) throw std::invalid_argument("upsample_transposed: expects a 1-channel map");
    const int k = upsample_kernel_size(factor);
    if (kernel.size() != static_cast<std::size_t>(k) * k)
        throw std::invalid_argument("upsample_transposed: kernel size mismatch");
    if (factor * m.h < target_h || factor * m.w < target_w)
        throw std::invalid_argument("upsample_transposed: input too small for target dims");
    const int pad = (k - factor) / 2;

    Tensor out(1, target_h, target_w);
    for (int iy = 0; iy < m.h; ++iy) {
        for (int ix = 0; ix < m.w; ++ix) {
            const double v = m.at(0, iy, ix);
            if (v == 0.0) continue;
            const int oy0 = iy * factor - pad;
            const int ox0 = ix * factor - pad;
            const int a0 = std::max(0, -oy0), a1 = std::min(k, target_h - oy0);
            const int b0 = std::max(0, -ox0), b1 = std::min(k, target_w - ox0);
            for (int a = a0; a < a1; ++a)
                for (int b = b0; b < b1; ++b)
                    out.at(0, oy0 + a, ox0 + b) += v * kernel[static_cast<std::size_t>(a) * k + b];
        }
    }
    return out;
}

Tensor upsample_transposed_backward_input(const Tensor& g_out, int factor,
                                          const std::vector<double>& kernel, int in_h, int in_w) {
    check_factor(factor);
    const int k = upsample_kernel_size(factor);
    if (kernel.size() != static_cast<std::size_t>(k) * k)
        throw std::invalid_argument("upsample backward: kernel size mismatch");
    const int pad = (k - factor) / 2;
    Tensor g_in(1, in_h, in_w);
    for (int iy = 0; iy < in_h; ++iy) {
        for (int ix = 0; ix < in_w; ++ix) {
            const int oy0 = iy * factor - pad;
            const int ox0 = ix * factor - pad;
            const int a0 = std::max(0, -oy0), a1 = std::min(k, g_out.h - oy0);
            const int b0 = std::max(0, -ox0), b1 = std::min(k, g_out.w - ox0);
            double acc = 0.0;
            for (int a = a0; a < a1; ++a)
                for (int b = b0; b < b1; ++b)
                    acc += g_out.at(0, oy0 + a, ox0 + b) * kernel[static_cast<std::size_t>(a) * k + b];
            g_in.at(0, iy, ix) = acc;
        }
    }
    return g_in;
}

void upsample_transposed_backward_kernel(const Tensor& in, const Tensor& g_out, int factor,
                                         int kernel_size, std::vector<double>& g_kernel) {
    check_factor(factor);
    const int k = kernel_size;
    if (g_kernel.size() != static_cast<std::size_t>(k) * k)
        throw std::invalid_argument("upsample backward: kernel gradient size mismatch");
    const int pad = (k - factor) / 2;
    for (int iy = 0; iy < in.h; ++iy) {
        for (int ix = 0; ix < in.w; ++ix) {
            const double v = in.at(0, iy, ix);
            if (v == 0.0) continue;
            const int oy0 = iy * factor - pad;
            const int ox0 = ix * factor - pad;
            const int a0 = std::max(0, -oy0), a1 = std::min(k, g_out.h - oy0);
            const int b0 = std::max(0, -ox0), b1 = std::min(k, g_out.w - ox0);
            for (int a = a0; a < a1; ++a)
                for (int b = b0; b < b1; ++b)
                    g_kernel[static_cast<std::size_t>(a) * k + b] += v * g_out.at(0, oy0 + a, ox0 + b);
        }
    }
}

int scaled_dim(int dim, double factor) {
    return std::max(1, static_cast<int>(std::lround(factor * dim)));
}

Tensor resize_bilinear(const Tensor& src, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1)
        throw std::invalid_argument("resize_bilinear: target dims must be >= 1");
    if (out_h == src.h && out_w == src.w) return src;

    Tensor out(src.c, out_h, out_w);
    const double sy_step = static_cast<double>(src.h) / out_h;
    const double sx_step = static_cast<double>(src.w) / out_w;
    for (int y = 0; y < out_h; ++y) {
        double sy = (y + 0.5) * sy_step - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(src.h - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, src.h - 1);
        const double fy = sy - y0;
        for (int x = 0; x < out_w; ++x) {
            double sx = (x + 0.5) * sx_step - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(src.w - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, src.w - 1);
            const double fx = sx - x0;
            for (int c = 0; c < src.c; ++c) {
                const double top = src.at(c, y0, x0) * (1.0 - fx) + src.at(c, y0, x1) * fx;
                const double bot = src.at(c, y1, x0) * (1.0 - fx) + src.at(c, y1, x1) * fx;
                out.at(c, y, x) = top * (1.0 - fy) + bot * fy;
            }
        }
    }
    return out;
}

Tensor resize_bilinear_backward(const Tensor& g_out, int in_h, int in_w) {
    if (g_out.h == in_h && g_out.w == in_w) return g_out;

    Tensor g_in(g_out.c, in_h, in_w);
    const double sy_step = static_cast<double>(in_h) / g_out.h;
    const double sx_step = static_cast<double>(in_w) / g_out.w;
    for (int y = 0; y < g_out.h; ++y) {
        double sy = (y + 0.5) * sy_step - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(in_h - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, in_h - 1);
        const double fy = sy - y0;
        for (int x = 0; x < g_out.w; ++x) {
            double sx = (x + 0.5) * sx_step - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(in_w - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, in_w - 1);
            const double fx = sx - x0;
            for (int c = 0; c < g_out.c; ++c) {
                const double g = g_out.at(c, y, x);
                g_in.at(c, y0, x0) += g * (1.0 - fx) * (1.0 - fy);
                g_in.at(c, y0, x1) += g * fx * (1.0 - fy);
                g_in.at(c, y1, x0) += g * (1.0 - fx) * fy;
                g_in.at(c, y1, x1) += g * fx * fy;
            }
        }
    }
    return g_in;
}

}  // namespace bdet
