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

#include "bdet/conv.hpp"

#include <algorithm>
#include <stdexcept>

namespace bdet {

ConvLayer::ConvLayer(int in_channels, int out_channels, int kernel_h, int kernel_w)
    : in_ch(in_channels), out_ch(out_channels), kh(kernel_h), kw(kernel_w) {
    if (in_ch < 1 || out_ch < 1 || kh < 1 || kw < 1 || kh % 2 == 0 || kw % 2 == 0)
        throw std::invalid_argument("ConvLayer: channels must be >= 1 and kernels odd");
    w.assign(static_cast<std::size_t>(out_ch) * in_ch * kh * kw, 0.0);
    b.assign(static_cast<std::size_t>(out_ch), 0.0);
}

Tensor conv2d_same(const ConvLayer& layer, const Tensor& in) {
    if (in.c != layer.in_ch)
        throw std::invalid_argument("conv2d_same: input channel mismatch");
    const int ph = layer.kh / 2, pw = layer.kw / 2;
    const int h = in.h, w = in.w;
    Tensor out(layer.out_ch, h, w);
    for (int o = 0; o < layer.out_ch; ++o) {
        auto oc = out.channel(o);
        for (auto& v : oc) v = layer.b[o];
        for (int i = 0; i < layer.in_ch; ++i) {
            auto ic = in.channel(i);
            for (int dy = 0; dy < layer.kh; ++dy) {
                for (int dx = 0; dx < layer.kw; ++dx) {
                    const double k = layer.wat(o, i, dy, dx);
                    if (k == 0.0) continue;
                    const int sy = dy - ph, sx = dx - pw;
                    const int y0 = std::max(0, -sy), y1 = std::min(h, h - sy);
                    const int x0 = std::max(0, -sx), x1 = std::min(w, w - sx);
                    for (int y = y0; y < y1; ++y) {
                        const double* src = &ic[static_cast<std::size_t>(y + sy) * w + (x0 + sx)];
                        double* dst = &oc[static_cast<std::size_t>(y) * w + x0];
                        for (int x = x0; x < x1; ++x) *dst++ += k * *src++;
                    }
                }
            }
        }
    }
    return out;
}

void conv2d_same_backward(const ConvLayer& layer, const Tensor& in, const Tensor& g_out,
                          Tensor* g_in, std::vector<double>* g_w, std::vector<double>* g_b) {
    if (in.c != layer.in_ch || g_out.c != layer.out_ch || g_out.h != in.h || g_out.w != in.w)
        throw std::invalid_argument("conv2d_same_backward: shape mismatch");
    const int ph = layer.kh / 2, pw = layer.kw / 2;
    const int h = in.h, w = in.w;

    if (g_b) {
        for (int o = 0; o < layer.out_ch; ++o) {
            double s = 0.0;
            for (double v : g_out.channel(o)) s += v;
            (*g_b)[o] += s;
        }
    }

    for (int o = 0; o < layer.out_ch; ++o) {
        auto gc = g_out.channel(o);
        for (int i = 0; i < layer.in_ch; ++i) {
            auto ic = in.channel(i);
            for (int dy = 0; dy < layer.kh; ++dy) {
                for (int dx = 0; dx < layer.kw; ++dx) {
                    const int sy = dy - ph, sx = dx - pw;
                    const int y0 = std::max(0, -sy), y1 = std::min(h, h - sy);
                    const int x0 = std::max(0, -sx), x1 = std::min(w, w - sx);
                    if (g_w) {
                        double acc = 0.0;
                        for (int y = y0; y < y1; ++y) {
                            const double* src = &ic[static_cast<std::size_t>(y + sy) * w + (x0 + sx)];
                            const double* g = &gc[static_cast<std::size_t>(y) * w + x0];
                            for (int x = x0; x < x1; ++x) acc += *g++ * *src++;
                        }
                        (*g_w)[((static_cast<std::size_t>(o) * layer.in_ch + i) * layer.kh + dy) * layer.kw + dx] += acc;
                    }
                    if (g_in) {
                        const double k = layer.wat(o, i, dy, dx);
                        if (k == 0.0) continue;
                        auto gic = g_in->channel(i);
                        for (int y = y0; y < y1; ++y) {
                            double* dst = &gic[static_cast<std::size_t>(y + sy) * w + (x0 + sx)];
                            const double* g = &gc[static_cast<std::size_t>(y) * w + x0];
                            for (int x = x0; x < x1; ++x) *dst++ += k * *g++;
                        }
                    }
                }
            }
        }
    }
}

Tensor relu(const Tensor& in) {
    Tensor out = in;
    for (auto& v : out.v) v = std::max(0.0, v);
    return out;
}

Tensor relu_backward(const Tensor& pre, const Tensor& g_out) {
    if (!pre.same_dims(g_out))
        throw std::invalid_argument("relu_backward: shape mismatch");
    Tensor g_in = g_out;
    for (std::size_t i = 0; i < g_in.v.size(); ++i)
        if (pre.v[i] <= 0.0) g_in.v[i] = 0.0;
    return g_in;
}

Tensor maxpool2(const Tensor& in, std::vector<std::size_t>* argmax) {
    const int oh = (in.h + 1) / 2, ow = (in.w + 1) / 2;
    Tensor out(in.c, oh, ow);
    if (argmax) argmax->assign(out.size(), 0);
    for (int c = 0; c < in.c; ++c) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                const int y0 = oy * 2, x0 = ox * 2;
                const int y1 = std::min(y0 + 2, in.h), x1 = std::min(x0 + 2, in.w);
                double best = in.at(c, y0, x0);
                std::size_t best_idx = (static_cast<std::size_t>(c) * in.h + y0) * in.w + x0;
                for (int y = y0; y < y1; ++y) {
                    for (int x = x0; x < x1; ++x) {
                        const double v = in.at(c, y, x);
                        if (v > best) {
                            best = v;
                            best_idx = (static_cast<std::size_t>(c) * in.h + y) * in.w + x;
                        }
                    }
                }
                out.at(c, oy, ox) = best;
                if (argmax)
                    (*argmax)[(static_cast<std::size_t>(c) * oh + oy) * ow + ox] = best_idx;
            }
        }
    }
    return out;
}

Tensor maxpool2_backward(const Tensor& in, const Tensor& g_out,
                         const std::vector<std::size_t>& argmax) {
    if (argmax.size() != g_out.size())
        throw std::invalid_argument("maxpool2_backward: argmax/gradient size mismatch");
    Tensor g_in(in.c, in.h, in.w);
    for (std::size_t i = 0; i < g_out.v.size(); ++i)
        g_in.v[argmax[i]] += g_out.v[i];
    return g_in;
}

}  // namespace bdet
