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
#include <utility>

#include "bdet/grid.hpp"

namespace bdet {

/// Per-pixel (category id, instance id) region labeling. Every pixel carries
/// exactly one pair; there is no unlabeled/sentinel value.
struct LabelMap {
    Grid<std::uint16_t> category;
    Grid<std::uint16_t> instance;

    LabelMap() = default;
    LabelMap(int width, int height)
        : category(width, height), instance(width, height) {}

    int width() const { return category.width(); }
    int height() const { return category.height(); }

    std::pair<std::uint16_t, std::uint16_t> label(int x, int y) const {
        return {category(x, y), instance(x, y)};
    }

    void validate() const {
        if (category.empty() || !category.same_dims(instance))
            throw std::invalid_argument("LabelMap: category/instance grids must be non-empty and equal-sized");
    }
};

}  // namespace bdet
