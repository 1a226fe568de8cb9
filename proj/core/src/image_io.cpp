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

#include "bdet/image_io.hpp"

#include <algorithm>
#include <cmath>

#include "bdet/io_error.hpp"
#include "bdet/png_io.hpp"

namespace bdet {

namespace {

std::filesystem::path cat_path(const std::filesystem::path& stem) {
    auto p = stem;
    p += ".cat.png";
    return p;
}

std::filesystem::path inst_path(const std::filesystem::path& stem) {
    auto p = stem;
    p += ".inst.png";
    return p;
}

png::PngImage from_grid16(const Grid<std::uint16_t>& g) {
    png::PngImage img;
    img.width = g.width();
    img.height = g.height();
    img.bit_depth = 16;
    img.channels = 1;
    img.samples.assign(g.data().begin(), g.data().end());
    return img;
}

Grid<std::uint16_t> to_grid16(const png::PngImage& img, const std::filesystem::path& path) {
    if (img.channels != 1 || img.bit_depth != 16)
        throw io_error(path.string(), 0, "expected 16-bit grayscale");
    Grid<std::uint16_t> g(img.width, img.height);
    std::copy(img.samples.begin(), img.samples.end(), g.data().begin());
    return g;
}

}  // namespace

void save_label_map(const LabelMap& lm, const std::filesystem::path& stem) {
    lm.validate();
    png::write_png(cat_path(stem), from_grid16(lm.category));
    png::write_png(inst_path(stem), from_grid16(lm.instance));
}

LabelMap load_label_map(const std::filesystem::path& stem) {
    LabelMap lm;
    lm.category = to_grid16(png::read_png(cat_path(stem)), cat_path(stem));
    lm.instance = to_grid16(png::read_png(inst_path(stem)), inst_path(stem));
    if (!lm.category.same_dims(lm.instance))
        throw io_error(inst_path(stem).string(), 0,
                       "instance grid dimensions do not match the category grid");
    return lm;
}

void save_boundary_map(const BoundaryMap& bm, const std::filesystem::path& path) {
    png::PngImage img;
    img.width = bm.width();
    img.height = bm.height();
    img.bit_depth = 8;
    img.channels = 1;
    img.samples.resize(bm.size());
    for (std::size_t i = 0; i < bm.size(); ++i) img.samples[i] = bm.data()[i] ? 255 : 0;
    png::write_png(path, img);
}

BoundaryMap load_boundary_map(const std::filesystem::path& path) {
    const png::PngImage img = png::read_png(path);
    if (img.channels != 1 || img.bit_depth != 8)
        throw io_error(path.string(), 0, "expected 8-bit grayscale boundary map");
    BoundaryMap bm(img.width, img.height);
    for (std::size_t i = 0; i < bm.size(); ++i) bm.data()[i] = img.samples[i] != 0 ? 1 : 0;
    return bm;
}

void save_soft_map(const SoftBoundaryMap& sm, const std::filesystem::path& path) {
    png::PngImage img;
    img.width = sm.width();
    img.height = sm.height();
    img.bit_depth = 8;
    img.channels = 1;
    img.samples.resize(sm.size());
    for (std::size_t i = 0; i < sm.size(); ++i) {
        const double v = sm.data()[i];
        if (!(v >= 0.0) || !(v <= 1.0))
            throw std::invalid_argument("save_soft_map: confidence outside [0,1]");
        img.samples[i] = static_cast<std::uint16_t>(std::lround(v * 255.0));
    }
    png::write_png(path, img);
}

SoftBoundaryMap load_soft_map(const std::filesystem::path& path) {
    const png::PngImage img = png::read_png(path);
    if (img.channels != 1 || img.bit_depth != 8)
        throw io_error(path.string(), 0, "expected 8-bit grayscale soft map");
    SoftBoundaryMap sm(img.width, img.height);
    for (std::size_t i = 0; i < sm.size(); ++i)
        sm.data()[i] = static_cast<double>(img.samples[i]) / 255.0;
    return sm;
}

void save_image_rgb(const Tensor& t, const std::filesystem::path& path) {
    if (t.c != 3) throw std::invalid_argument("save_image_rgb: expected 3 channels");
    png::PngImage img;
    img.width = t.w;
    img.height = t.h;
    img.bit_depth = 8;
    img.channels = 3;
    img.samples.resize(static_cast<std::size_t>(t.w) * t.h * 3);
    for (int y = 0; y < t.h; ++y)
        for (int x = 0; x < t.w; ++x)
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(t.at(c, y, x), 0.0, 1.0);
                img.at(x, y, c) = static_cast<std::uint16_t>(std::lround(v * 255.0));
            }
    png::write_png(path, img);
}

Tensor load_image_rgb(const std::filesystem::path& path) {
    const png::PngImage img = png::read_png(path);
    if (img.channels != 3 || img.bit_depth != 8)
        throw io_error(path.string(), 0, "expected 8-bit rgb image");
    Tensor t(3, img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c)
                t.at(c, y, x) = static_cast<double>(img.at(x, y, c)) / 255.0;
    return t;
}

}  // namespace bdet
