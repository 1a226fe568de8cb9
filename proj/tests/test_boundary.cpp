#include <doctest.h>

#include <algorithm>
#include <map>

#include "bdet/boundary.hpp"
#include "test_util.hpp"

using namespace bdet;
using namespace testutil;

namespace {

LabelMap uniform_map(int w, int h, std::uint16_t cat = 1, std::uint16_t inst = 1) {
    LabelMap lm(w, h);
    for (auto& v : lm.category.data()) v = cat;
    for (auto& v : lm.instance.data()) v = inst;
    return lm;
}

LabelMap half_half_4x4() {
    LabelMap lm = uniform_map(4, 4, 1, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 2; x < 4; ++x) lm.category(x, y) = 2;
    return lm;
}

}  // namespace

TEST_CASE("extract_boundaries: uniform map has no boundaries") {
    const BoundaryMap bm = extract_boundaries(uniform_map(4, 4));
    CHECK(count_set(bm) == 0);
}

TEST_CASE("extract_boundaries: straight interface marks both sides") {
    const BoundaryMap bm = extract_boundaries(half_half_4x4(), Connectivity::four);
    CHECK(count_set(bm) == 8);
    for (int y = 0; y < 4; ++y) {
        CHECK(bm(0, y) == 0);
        CHECK(bm(1, y) == 1);
        CHECK(bm(2, y) == 1);
        CHECK(bm(3, y) == 0);
    }
}

TEST_CASE("extract_boundaries: matches brute-force neighbor scan") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const LabelMap lm = random_label_map(rng, 8, 8, 3, 2);
        CHECK(extract_boundaries(lm, Connectivity::four) == brute_force_boundaries(lm, false));
        CHECK(extract_boundaries(lm, Connectivity::eight) == brute_force_boundaries(lm, true));
    }
}

TEST_CASE("extract_boundaries: invariant under label permutation") {
    Rng rng(7);
    const LabelMap lm = random_label_map(rng, 10, 10, 4, 3);
    LabelMap relabeled = lm;
    // injective remaps
    for (auto& v : relabeled.category.data()) v = static_cast<std::uint16_t>(7 * v + 3);
    for (auto& v : relabeled.instance.data()) v = static_cast<std::uint16_t>(11 * v + 5);
    CHECK(extract_boundaries(lm) == extract_boundaries(relabeled));
}

TEST_CASE("extract_boundaries: symmetry, both sides of an interface masked") {
    Rng rng(11);
    const LabelMap lm = random_label_map(rng, 12, 12, 3, 2);
    const BoundaryMap bm = extract_boundaries(lm, Connectivity::four);
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 12; ++x) {
            for (int d = 0; d < 4; ++d) {
                const int nx = x + dx[d], ny = y + dy[d];
                if (!bm.in_bounds(nx, ny)) continue;
                if (lm.label(x, y) != lm.label(nx, ny)) {
                    CHECK(bm(x, y) == 1);
                    CHECK(bm(nx, ny) == 1);
                }
            }
        }
    }
}

TEST_CASE("extract_boundaries: non-empty when two labels touch") {
    LabelMap lm = uniform_map(5, 5);
    lm.instance(2, 2) = 9;
    CHECK(count_set(extract_boundaries(lm)) > 0);
}

TEST_CASE("thin: straight one-pixel column is unchanged") {
    BoundaryMap m(7, 7, 0);
    for (int y = 0; y < 7; ++y) m(3, y) = 1;
    CHECK(thin(m) == m);
}

TEST_CASE("thin: two-pixel band collapses to one deterministic column") {
    const BoundaryMap band = extract_boundaries(half_half_4x4(), Connectivity::four);
    const BoundaryMap t = thin(band);
    // post-conditions: subset, 4 pixels left, single full-height column
    CHECK(count_set(t) == 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            if (t(x, y)) CHECK(band(x, y) == 1);
    int cols_used = 0;
    for (int x = 0; x < 4; ++x) {
        int col = 0;
        for (int y = 0; y < 4; ++y) col += t(x, y);
        if (col > 0) {
            ++cols_used;
            CHECK(col == 4);
        }
    }
    CHECK(cols_used == 1);
    CHECK(thin(t) == t);  // deterministic fixpoint
}

TEST_CASE("thin: thick ring keeps its hole") {
    BoundaryMap ring(12, 12, 0);
    for (int y = 2; y <= 9; ++y)
        for (int x = 2; x <= 9; ++x)
            if (!(x >= 4 && x <= 7 && y >= 4 && y <= 7)) ring(x, y) = 1;
    REQUIRE(count_fg_components(ring) == 1);
    REQUIRE(count_holes(ring) == 1);

    const BoundaryMap t = thin(ring);
    CHECK(count_fg_components(t) == 1);
    CHECK(count_holes(t) == 1);
    CHECK(!has_2x2_block(t));
    CHECK(count_set(t) < count_set(ring));
}

TEST_CASE("thin: topology and width invariants on random masks") {
    Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const LabelMap lm = random_label_map(rng, 16, 16, 3, 2);
        const BoundaryMap bm = extract_boundaries(lm, Connectivity::four);
        const BoundaryMap t = thin(bm);
        // subset
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x)
                if (t(x, y)) CHECK(bm(x, y) == 1);
        CHECK(!has_2x2_block(t));
        CHECK(count_fg_components(t) == count_fg_components(bm));
        CHECK(count_holes(t) == count_holes(bm));
        CHECK(thin(t) == t);  // idempotent
    }
}

TEST_CASE("detect_junctions: uniform map has none") {
    CHECK(detect_junctions(uniform_map(6, 6)).empty());
}

TEST_CASE("detect_junctions: three labels in a 2x2 window") {
    LabelMap lm(2, 2);
    lm.category(0, 0) = 1;
    lm.category(1, 0) = 2;
    lm.category(0, 1) = 3;
    lm.category(1, 1) = 3;
    for (auto& v : lm.instance.data()) v = 1;
    const auto j = detect_junctions(lm);
    REQUIRE(j.size() == 1);
    CHECK(j[0] == Point{0, 0});
}

TEST_CASE("detect_junctions: T-junction matches brute-force window scan") {
    // three regions: left | right, with a horizontal seam through the right half
    LabelMap lm(8, 8);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            lm.instance(x, y) = 1;
            if (x < 4)
                lm.category(x, y) = 1;
            else
                lm.category(x, y) = y < 4 ? 2 : 3;
        }
    }
    const auto got = detect_junctions(lm);

    std::vector<Point> expected;
    for (int y = 0; y + 1 < 8; ++y) {
        for (int x = 0; x + 1 < 8; ++x) {
            std::vector<std::pair<std::uint16_t, std::uint16_t>> labels = {
                lm.label(x, y), lm.label(x + 1, y), lm.label(x, y + 1), lm.label(x + 1, y + 1)};
            std::sort(labels.begin(), labels.end());
            labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
            if (labels.size() >= 3) expected.push_back({x, y});
        }
    }
    CHECK(got == expected);
}

TEST_CASE("boundary_pixel_fraction") {
    CHECK(boundary_pixel_fraction(BoundaryMap(4, 4, 0)) == 0.0);
    const BoundaryMap bm = extract_boundaries(half_half_4x4());
    CHECK(boundary_pixel_fraction(bm) == doctest::Approx(0.5));
}

TEST_CASE("category_pair_lengths: half/half and uniform maps") {
    const PairLengthTable t = category_pair_lengths(half_half_4x4(), Connectivity::four);
    REQUIRE(t.size() == 1);
    CHECK(t[0] == PairLength{1, 2, 4});
    CHECK(category_pair_lengths(uniform_map(5, 5)).empty());
}

TEST_CASE("category_pair_lengths: instance boundaries land in the (c,c) row") {
    LabelMap lm = uniform_map(4, 2, 3, 1);
    for (int y = 0; y < 2; ++y)
        for (int x = 2; x < 4; ++x) lm.instance(x, y) = 2;
    const PairLengthTable t = category_pair_lengths(lm, Connectivity::four);
    REQUIRE(t.size() == 1);
    CHECK(t[0] == PairLength{3, 3, 2});
}

TEST_CASE("category_pair_lengths: matches exhaustive pair counting") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const LabelMap lm = random_label_map(rng, 8, 8, 3, 2);
        for (const bool eight : {false, true}) {
            const auto table =
                category_pair_lengths(lm, eight ? Connectivity::eight : Connectivity::four);

            // oracle: enumerate unordered adjacent pairs directly
            std::int64_t cross_pairs = 0;
            std::map<std::pair<int, int>, std::int64_t> want;
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 8; ++x) {
                    const int dx[4] = {1, 0, 1, -1};
                    const int dy[4] = {0, 1, 1, 1};
                    for (int d = 0; d < (eight ? 4 : 2); ++d) {
                        const int nx = x + dx[d], ny = y + dy[d];
                        if (nx < 0 || nx >= 8 || ny < 0 || ny >= 8) continue;
                        const auto a = lm.label(x, y), b = lm.label(nx, ny);
                        if (a == b) continue;
                        const int ca = std::min(a.first, b.first);
                        const int cb = std::max(a.first, b.first);
                        ++want[{ca, cb}];
                        if (a.first != b.first) ++cross_pairs;
                    }
                }
            }
            REQUIRE(table.size() == want.size());
            std::int64_t cross_total = 0;
            for (const auto& row : table) {
                CHECK(want.at({row.cat_a, row.cat_b}) == row.length);
                if (row.cat_a != row.cat_b) cross_total += row.length;
            }
            CHECK(cross_total == cross_pairs);
            // sorted descending
            for (std::size_t i = 1; i < table.size(); ++i)
                CHECK(table[i - 1].length >= table[i].length);
        }
    }
}
