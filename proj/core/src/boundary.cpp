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

#include "bdet/boundary.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>

namespace bdet {

namespace {

// Ring positions around a pixel, circular order N, NE, E, SE, S, SW, W, NW.
constexpr int kRingDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kRingDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

inline std::array<std::uint8_t, 8> ring(const BoundaryMap& m, int x, int y) {
    std::array<std::uint8_t, 8> r{};
    for (int i = 0; i < 8; ++i)
        r[i] = m.at_or(x + kRingDx[i], y + kRingDy[i], std::uint8_t{0});
    return r;
}

// Deleting (x, y) keeps both the 8-connected foreground topology and the
// 4-connected background topology iff the neighborhood has exactly one
// foreground 8-component and exactly one background 4-component touching a
// 4-neighbor of the pixel.
bool is_simple8(const BoundaryMap& m, int x, int y) {
    const auto r = ring(m, x, y);

    int fg_comp = 0;
    std::array<bool, 8> seen{};
    for (int i = 0; i < 8; ++i) {
        if (!r[i] || seen[i]) continue;
        ++fg_comp;
        int stack[8];
        int top = 0;
        stack[top++] = i;
        seen[i] = true;
        while (top > 0) {
            const int a = stack[--top];
            for (int b = 0; b < 8; ++b) {
                if (!r[b] || seen[b]) continue;
                const int dx = std::abs(kRingDx[a] - kRingDx[b]);
                const int dy = std::abs(kRingDy[a] - kRingDy[b]);
                if (std::max(dx, dy) == 1) {
                    seen[b] = true;
                    stack[top++] = b;
                }
            }
        }
    }
    if (fg_comp != 1) return false;

    int bg_comp_touching = 0;
    std::array<bool, 8> seen_bg{};
    for (int i = 0; i < 8; ++i) {
        if (r[i] || seen_bg[i]) continue;
        bool touches4 = false;
        int stack[8];
        int top = 0;
        stack[top++] = i;
        seen_bg[i] = true;
        while (top > 0) {
            const int a = stack[--top];
            if (a % 2 == 0) touches4 = true;  // even ring slots are N, E, S, W
            for (int b = 0; b < 8; ++b) {
                if (r[b] || seen_bg[b]) continue;
                const int dx = std::abs(kRingDx[a] - kRingDx[b]);
                const int dy = std::abs(kRingDy[a] - kRingDy[b]);
                if (dx + dy == 1) {
                    seen_bg[b] = true;
                    stack[top++] = b;
                }
            }
        }
        if (touches4) ++bg_comp_touching;
    }
    return bg_comp_touching == 1;
}

// Two-subiteration deletion test (Guo-Hall conditions) on a snapshot.
bool gh_marked(const std::array<std::uint8_t, 8>& r, int sub) {
    const int p2 = r[0], p3 = r[1], p4 = r[2], p5 = r[3];
    const int p6 = r[4], p7 = r[5], p8 = r[6], p9 = r[7];
    const int c = ((!p2) & (p3 | p4)) + ((!p4) & (p5 | p6)) +
                  ((!p6) & (p7 | p8)) + ((!p8) & (p9 | p2));
    const int n1 = (p9 | p2) + (p3 | p4) + (p5 | p6) + (p7 | p8);
    const int n2 = (p2 | p3) + (p4 | p5) + (p6 | p7) + (p8 | p9);
    const int n = std::min(n1, n2);
    const int m = (sub == 0) ? ((p6 | p7 | (!p9)) & p8) : ((p2 | p3 | (!p5)) & p4);
    return c == 1 && n >= 2 && n <= 3 && m == 0;
}

int fg_neighbor_count(const BoundaryMap& m, int x, int y) {
    const auto r = ring(m, x, y);
    int n = 0;
    for (auto v : r) n += (v != 0);
    return n;
}

}  // namespace

BoundaryMap extract_boundaries(const LabelMap& lm, Connectivity conn) {
    lm.validate();
    const int w = lm.width(), h = lm.height();
    BoundaryMap out(w, h, 0);
    const int n_dirs = conn == Connectivity::four ? 4 : 8;
    // N, E, S, W first; diagonals after
    static constexpr int dx[8] = {0, 1, 0, -1, 1, 1, -1, -1};
    static constexpr int dy[8] = {-1, 0, 1, 0, -1, 1, 1, -1};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto here = lm.label(x, y);
            for (int d = 0; d < n_dirs; ++d) {
                const int nx = x + dx[d];
                const int ny = y + dy[d];
                if (!lm.category.in_bounds(nx, ny)) continue;
                if (lm.label(nx, ny) != here) {
                    out(x, y) = 1;
                    break;
                }
            }
        }
    }
    return out;
}

BoundaryMap thin(const BoundaryMap& bm) {
    BoundaryMap m = bm;
    const int w = m.width(), h = m.height();

    std::vector<Point> marks;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int sub = 0; sub < 2; ++sub) {
            marks.clear();
            const BoundaryMap snap = m;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    if (snap(x, y) && gh_marked(ring(snap, x, y), sub))
                        marks.push_back({x, y});
            // Sequential deletion; each removal is re-checked as a simple
            // point on the current mask so topology cannot break even where
            // the parallel marks interact.
            for (const auto& p : marks) {
                if (fg_neighbor_count(m, p.x, p.y) >= 2 && is_simple8(m, p.x, p.y)) {
                    m(p.x, p.y) = 0;
                    changed = true;
                }
            }
        }
    }

    // Directional passes can stall with residual 2x2 blocks (image borders,
    // junction clusters). Clear them with raster-ordered simple deletions.
    bool block_changed = true;
    while (block_changed) {
        block_changed = false;
        for (int y = 0; y + 1 < h; ++y) {
            for (int x = 0; x + 1 < w; ++x) {
                if (!(m(x, y) && m(x + 1, y) && m(x, y + 1) && m(x + 1, y + 1))) continue;
                const Point cand[4] = {{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}};
                for (const auto& p : cand) {
                    if (is_simple8(m, p.x, p.y)) {
                        m(p.x, p.y) = 0;
                        block_changed = true;
                        break;
                    }
                }
            }
        }
    }
    return m;
}

std::vector<Point> detect_junctions(const LabelMap& lm) {
    lm.validate();
    std::vector<Point> out;
    const int w = lm.width(), h = lm.height();
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
            const std::pair<std::uint16_t, std::uint16_t> l[4] = {
                lm.label(x, y), lm.label(x + 1, y), lm.label(x, y + 1), lm.label(x + 1, y + 1)};
            int distinct = 0;
            for (int i = 0; i < 4; ++i) {
                bool dup = false;
                for (int j = 0; j < i; ++j)
                    if (l[i] == l[j]) dup = true;
                if (!dup) ++distinct;
            }
            if (distinct >= 3) out.push_back({x, y});
        }
    }
    return out;
}

double boundary_pixel_fraction(const BoundaryMap& bm) {
    if (bm.empty()) throw std::invalid_argument("boundary_pixel_fraction: empty map");
    return static_cast<double>(count_set(bm)) / static_cast<double>(bm.size());
}

PairLengthTable category_pair_lengths(const LabelMap& lm, Connectivity conn) {
    lm.validate();
    const int w = lm.width(), h = lm.height();
    // each unordered adjacent pair visited once: right/down (+ the two
    // down-diagonals under eight-connectivity)
    const int n_dirs = conn == Connectivity::four ? 2 : 4;
    static constexpr int dx[4] = {1, 0, 1, -1};
    static constexpr int dy[4] = {0, 1, 1, 1};

    std::map<std::pair<std::uint16_t, std::uint16_t>, std::int64_t> counts;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int d = 0; d < n_dirs; ++d) {
                const int nx = x + dx[d];
                const int ny = y + dy[d];
                if (!lm.category.in_bounds(nx, ny)) continue;
                const auto a = lm.label(x, y);
                const auto b = lm.label(nx, ny);
                if (a == b) continue;
                const std::uint16_t ca = std::min(a.first, b.first);
                const std::uint16_t cb = std::max(a.first, b.first);
                ++counts[{ca, cb}];
            }
        }
    }

    PairLengthTable table;
    table.reserve(counts.size());
    for (const auto& [key, n] : counts) table.push_back({key.first, key.second, n});
    std::sort(table.begin(), table.end(), [](const PairLength& a, const PairLength& b) {
        if (a.length != b.length) return a.length > b.length;
        if (a.cat_a != b.cat_a) return a.cat_a < b.cat_a;
        return a.cat_b < b.cat_b;
    });
    return table;
}

}  // namespace bdet
