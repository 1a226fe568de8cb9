#include <doctest.h>

#include <cmath>

#include "bdet/boundary.hpp"
#include "bdet/scoring.hpp"
#include "test_util.hpp"

using namespace bdet;
using namespace testutil;

TEST_CASE("f_measure basics") {
    CHECK(f_measure(1.0, 1.0) == 1.0);
    CHECK(f_measure(0.0, 0.7) == 0.0);
    CHECK(f_measure(0.0, 0.0) == 0.0);
    CHECK(f_measure(0.5, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("default_thresholds: k/100 grid") {
    const auto t = default_thresholds(99);
    REQUIRE(t.size() == 99);
    CHECK(t.front() == doctest::Approx(0.01));
    CHECK(t.back() == doctest::Approx(0.99));
}

TEST_CASE("binarize_and_thin basics") {
    SoftBoundaryMap zeros(6, 6, 0.0);
    CHECK(count_set(binarize_and_thin(zeros, 0.5)) == 0);

    // a binary map thresholds to itself, then thins
    SoftBoundaryMap binary(6, 6, 0.0);
    BoundaryMap mask(6, 6, 0);
    for (int y = 1; y < 5; ++y) {
        binary(2, y) = 1.0;
        binary(3, y) = 1.0;
        mask(2, y) = 1;
        mask(3, y) = 1;
    }
    CHECK(binarize_and_thin(binary, 0.5) == thin(mask));
}

TEST_CASE("thresholding is monotone before thinning") {
    Rng rng(8);
    SoftBoundaryMap ramp(10, 10, 0.0);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) ramp(x, y) = rng.uniform01();
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x)
            if (ramp(x, y) >= 0.7) CHECK(ramp(x, y) >= 0.3);  // mask at 0.7 subset of mask at 0.3
}

TEST_CASE("evaluate_image: perfect predictor scores 1 everywhere") {
    Rng rng(3);
    const LabelMap lm = random_label_map(rng, 12, 12, 3, 1);
    const BoundaryMap gt = thin(extract_boundaries(lm));
    REQUIRE(count_set(gt) > 0);
    SoftBoundaryMap soft(12, 12, 0.0);
    for (int y = 0; y < 12; ++y)
        for (int x = 0; x < 12; ++x) soft(x, y) = gt(x, y) ? 1.0 : 0.0;

    const auto pts = evaluate_image(soft, gt, default_thresholds(9), 2.0);
    for (const auto& p : pts) {
        CHECK(p.precision == 1.0);
        CHECK(p.recall == 1.0);
        CHECK(p.f == 1.0);
    }
}

TEST_CASE("evaluate_image: empty prediction has zero recall and F") {
    Rng rng(4);
    const LabelMap lm = random_label_map(rng, 12, 12, 3, 1);
    const BoundaryMap gt = thin(extract_boundaries(lm));
    REQUIRE(count_set(gt) > 0);
    const SoftBoundaryMap soft(12, 12, 0.0);
    for (const auto& p : evaluate_image(soft, gt, default_thresholds(9), 2.0)) {
        CHECK(p.recall == 0.0);
        CHECK(p.f == 0.0);
        CHECK(p.precision == 1.0);  // empty-prediction convention
        CHECK(p.n_pred == 0);
    }
}

TEST_CASE("evaluate_image: agrees with an independent matching + formula chain") {
    Rng rng(2910);
    const LabelMap lm = random_label_map(rng, 12, 12, 3, 2);
    const BoundaryMap gt = thin(extract_boundaries(lm));
    SoftBoundaryMap soft(12, 12, 0.0);
    for (int y = 0; y < 12; ++y)
        for (int x = 0; x < 12; ++x) soft(x, y) = rng.uniform01();

    const auto thresholds = default_thresholds(7);
    const double d_max = 2.0;
    const auto pts = evaluate_image(soft, gt, thresholds, d_max);
    REQUIRE(pts.size() == thresholds.size());

    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        // oracle: threshold + thin + reference matcher + direct P/R/F math
        BoundaryMap mask(12, 12, 0);
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x < 12; ++x) mask(x, y) = soft(x, y) >= thresholds[i] ? 1 : 0;
        const BoundaryMap pred = thin(mask);
        const auto pp = mask_points(pred);
        const auto gp = mask_points(gt);
        const int tp = reference_max_matching(pp, gp, d_max);
        const double prec = pp.empty() ? 1.0 : static_cast<double>(tp) / pp.size();
        const double rec = gp.empty() ? 1.0 : static_cast<double>(tp) / gp.size();
        const double f = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;

        CHECK(pts[i].tp_pred == tp);
        CHECK(pts[i].n_pred == static_cast<std::int64_t>(pp.size()));
        CHECK(pts[i].n_gt == static_cast<std::int64_t>(gp.size()));
        CHECK(pts[i].precision == doctest::Approx(prec).epsilon(1e-12));
        CHECK(pts[i].recall == doctest::Approx(rec).epsilon(1e-12));
        CHECK(pts[i].f == doctest::Approx(f).epsilon(1e-12));
    }
}

namespace {

PRPoint counts(double t, std::int64_t tp, std::int64_t np, std::int64_t tg, std::int64_t ng) {
    PRPoint p;
    p.threshold = t;
    p.tp_pred = tp;
    p.n_pred = np;
    p.tp_gt = tg;
    p.n_gt = ng;
    p.precision = np > 0 ? double(tp) / double(np) : 1.0;
    p.recall = ng > 0 ? double(tg) / double(ng) : 1.0;
    p.f = p.precision + p.recall > 0 ? 2 * p.precision * p.recall / (p.precision + p.recall) : 0.0;
    return p;
}

}  // namespace

TEST_CASE("aggregate: single image degeneracy, OIS equals ODS") {
    std::vector<std::vector<PRPoint>> per_image = {{
        counts(0.25, 4, 8, 4, 10),
        counts(0.50, 5, 6, 5, 10),
        counts(0.75, 2, 2, 2, 10),
    }};
    const BenchmarkSummary s = aggregate(per_image);
    CHECK(s.ois_f == s.ods_f);
    // best F among the three points
    double best = 0.0;
    for (const auto& p : per_image[0]) best = std::max(best, p.f);
    CHECK(s.ods_f == doctest::Approx(best));
}

TEST_CASE("aggregate: perfect predictions give unit scores") {
    std::vector<std::vector<PRPoint>> per_image;
    for (int i = 0; i < 3; ++i)
        per_image.push_back({counts(0.3, 9, 9, 9, 9), counts(0.6, 9, 9, 9, 9)});
    const BenchmarkSummary s = aggregate(per_image);
    CHECK(s.ods_f == 1.0);
    CHECK(s.ois_f == 1.0);
    CHECK(s.ap == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("aggregate: two-image hand-computed aggregation") {
    // image A peaks at t=0.25, image B at t=0.75
    const std::vector<PRPoint> a = {counts(0.25, 8, 10, 8, 10), counts(0.75, 2, 10, 2, 10)};
    const std::vector<PRPoint> b = {counts(0.25, 1, 10, 1, 10), counts(0.75, 9, 10, 9, 10)};
    const BenchmarkSummary s = aggregate({a, b});

    // ODS by hand: t=0.25 -> tp 9 / 20 pred, 9 / 20 gt -> P=R=F=0.45
    //              t=0.75 -> tp 11 -> 0.55. Max at 0.75.
    CHECK(s.ods_threshold == doctest::Approx(0.75));
    CHECK(s.ods_f == doctest::Approx(0.55));
    // OIS by hand: A picks 0.25 (8/10), B picks 0.75 (9/10): tp 17/20 -> 0.85.
    CHECK(s.ois_f == doctest::Approx(0.85));
    CHECK(s.ois_f >= s.ods_f - 1e-12);

    // AP by hand: curve points (r=0.45, p=0.45), (r=0.55, p=0.55).
    // interpolated precision: r <= 0.45 -> 0.55 (max over recall >= r),
    // 0.45 < r <= 0.55 -> 0.55, r > 0.55 -> 0.
    // samples 0.00..0.55 (56 samples) at 0.55, rest 0.
    CHECK(s.ap == doctest::Approx(56.0 * 0.55 / 101.0).epsilon(1e-12));
}

TEST_CASE("aggregate: rejects empty and mismatched inputs") {
    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
    const std::vector<PRPoint> a = {counts(0.25, 1, 2, 1, 2)};
    const std::vector<PRPoint> b = {counts(0.50, 1, 2, 1, 2)};
    CHECK_THROWS_AS(aggregate({a, b}), std::invalid_argument);
}

TEST_CASE("aggregate: OIS >= ODS on random multi-image suites") {
    Rng rng(555);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<PRPoint>> per_image;
        const auto thresholds = default_thresholds(5);
        for (int img = 0; img < 4; ++img) {
            std::vector<PRPoint> pts;
            for (double t : thresholds) {
                const auto ng = rng.uniform_int(1, 30);
                const auto np = rng.uniform_int(0, 30);
                const auto tp = rng.uniform_int(0, std::min(np, ng));
                pts.push_back(counts(t, tp, np, tp, ng));
            }
            per_image.push_back(std::move(pts));
        }
        const BenchmarkSummary s = aggregate(per_image);
        CHECK(s.ois_f >= s.ods_f - 1e-12);
        CHECK(s.ap >= 0.0);
        CHECK(s.ap <= 1.0);
    }
}
