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

#include "bdet/matching.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace bdet {

namespace {

std::vector<Point> set_pixels(const BoundaryMap& m) {
    std::vector<Point> pts;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m(x, y)) pts.push_back({x, y});
    return pts;
}

// Hopcroft-Karp on an adjacency list; left vertices 0..nl-1, right 0..nr-1.
// Deterministic for a fixed adjacency order.
class BipartiteMatcher {
public:
    BipartiteMatcher(int nl, int nr, std::vector<std::vector<int>> adj)
        : nl_(nl), nr_(nr), adj_(std::move(adj)),
          match_l_(nl, -1), match_r_(nr, -1), dist_(nl) {}

    int solve() {
        int matched = 0;
        while (bfs()) {
            for (int u = 0; u < nl_; ++u)
                if (match_l_[u] < 0 && dfs(u)) ++matched;
        }
        return matched;
    }

    const std::vector<int>& left_matches() const { return match_l_; }

private:
    static constexpr int kInf = std::numeric_limits<int>::max();

    bool bfs() {
        std::queue<int> q;
        for (int u = 0; u < nl_; ++u) {
            if (match_l_[u] < 0) {
                dist_[u] = 0;
                q.push(u);
            } else {
                dist_[u] = kInf;
            }
        }
        bool reachable_free = false;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : adj_[u]) {
                const int w = match_r_[v];
                if (w < 0) {
                    reachable_free = true;
                } else if (dist_[w] == kInf) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return reachable_free;
    }

    bool dfs(int u) {
        for (int v : adj_[u]) {
            const int w = match_r_[v];
            if (w < 0 || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_l_[u] = v;
                match_r_[v] = u;
                return true;
            }
        }
        dist_[u] = kInf;
        return false;
    }

    int nl_, nr_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_, match_r_;
    std::vector<int> dist_;
};

}  // namespace

double default_d_max(int width, int height) {
    return 0.0075 * std::hypot(static_cast<double>(width), static_cast<double>(height));
}

MatchResult correspond(const BoundaryMap& pred, const BoundaryMap& gt, double d_max) {
    if (!pred.same_dims(gt))
        throw std::invalid_argument("correspond: pred/gt dimension mismatch");
    if (!(d_max > 0.0))
        throw std::invalid_argument("correspond: d_max must be > 0");

    const std::vector<Point> lp = set_pixels(pred);
    const std::vector<Point> rp = set_pixels(gt);

    MatchResult res;
    res.n_pred = static_cast<std::int64_t>(lp.size());
    res.n_gt = static_cast<std::int64_t>(rp.size());
    if (lp.empty() || rp.empty()) return res;

    // Bin gt pixels into cells of side ~d_max; candidates for a pred pixel
    // live in the 3x3 cell block around it.
    const int cell = std::max(1, static_cast<int>(std::ceil(d_max)));
    const int cw = (gt.width() + cell - 1) / cell;
    const int ch = (gt.height() + cell - 1) / cell;
    std::vector<std::vector<int>> bins(static_cast<std::size_t>(cw) * ch);
    for (int i = 0; i < static_cast<int>(rp.size()); ++i)
        bins[static_cast<std::size_t>(rp[i].y / cell) * cw + rp[i].x / cell].push_back(i);

    const double cap = d_max * d_max;
    std::vector<std::vector<int>> adj(lp.size());
    for (int i = 0; i < static_cast<int>(lp.size()); ++i) {
        const Point p = lp[i];
        const int cx = p.x / cell, cy = p.y / cell;
        for (int by = std::max(0, cy - 1); by <= std::min(ch - 1, cy + 1); ++by) {
            for (int bx = std::max(0, cx - 1); bx <= std::min(cw - 1, cx + 1); ++bx) {
                for (int j : bins[static_cast<std::size_t>(by) * cw + bx]) {
                    const double dx = p.x - rp[j].x;
                    const double dy = p.y - rp[j].y;
                    if (dx * dx + dy * dy <= cap) adj[i].push_back(j);
                }
            }
        }
    }

    BipartiteMatcher matcher(static_cast<int>(lp.size()), static_cast<int>(rp.size()), std::move(adj));
    matcher.solve();
    for (int i = 0; i < static_cast<int>(lp.size()); ++i) {
        const int j = matcher.left_matches()[i];
        if (j >= 0) res.matched_pairs.emplace_back(lp[i], rp[j]);
    }
    return res;
}

}  // namespace bdet
