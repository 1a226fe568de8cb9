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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace bdet {

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Row-major 2D raster; (x, y) with y counting rows from the top.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : w_(width), h_(height) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("Grid: dimensions must be >= 1");
        v_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return w_; }
    int height() const { return h_; }
    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < w_ && y >= 0 && y < h_;
    }

    T& operator()(int x, int y) { return v_[static_cast<std::size_t>(y) * w_ + x]; }
    const T& operator()(int x, int y) const { return v_[static_cast<std::size_t>(y) * w_ + x]; }

    /// Value at (x, y), or `outside` when out of bounds.
    T at_or(int x, int y, T outside) const {
        return in_bounds(x, y) ? (*this)(x, y) : outside;
    }

    std::span<T> data() { return v_; }
    std::span<const T> data() const { return v_; }

    bool same_dims(const Grid& o) const { return w_ == o.w_ && h_ == o.h_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int w_ = 0;
    int h_ = 0;
    std::vector<T> v_;
};

/// Binary boundary mask; 0 = off, 1 = boundary pixel.
using BoundaryMap = Grid<std::uint8_t>;

/// Per-pixel boundary confidence in [0, 1].
using SoftBoundaryMap = Grid<double>;

inline std::int64_t count_set(const BoundaryMap& m) {
    std::int64_t n = 0;
    for (auto v : m.data()) n += (v != 0);
    return n;
}

}  // namespace bdet
