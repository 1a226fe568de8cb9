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
#include <filesystem>
#include <vector>

namespace bdet::png {

/// Decoded raster. Samples are row-major, channel-interleaved, host order;
/// 8-bit images use the low byte of each entry.
struct PngImage {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // 8 or 16
    int channels = 1;   // 1 = grayscale, 3 = rgb
    std::vector<std::uint16_t> samples;

    std::uint16_t& at(int x, int y, int c = 0) {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint16_t at(int x, int y, int c = 0) const {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

/// Non-interlaced grayscale (8/16-bit) and 8-bit RGB PNG support; all five
/// scanline filters on read, filter 0 on write, fixed deflate settings so
/// identical rasters produce identical bytes. Throws bdet::io_error with
/// the failing byte offset.
PngImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const PngImage& img);

}  // namespace bdet::png
