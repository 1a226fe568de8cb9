#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "bdet/boundary.hpp"
#include "bdet/synth.hpp"
#include "bdet/train.hpp"
#include "test_util.hpp"

using namespace bdet;
using namespace testutil;

namespace {

NetConfig tiny_net() {
    NetConfig cfg;
    cfg.in_channels = 3;
    cfg.stage_widths = {4, 6};
    cfg.convs_per_stage = 2;
    cfg.scales = {1.0, 0.5};
    return cfg;
}

TrainSample random_sample(Rng& rng, int size) {
    TrainSample s;
    s.image = Tensor(3, size, size);
    for (auto& v : s.image.v) v = rng.uniform01();
    s.gt = BoundaryMap(size, size, 0);
    for (auto& v : s.gt.data()) v = rng.uniform01() < 0.2 ? 1 : 0;
    return s;
}

std::vector<TrainSample> scene_samples(int n, int size, std::uint64_t seed0) {
    std::vector<TrainSample> data;
    for (int i = 0; i < n; ++i) {
        SynthSpec spec;
        spec.seed = seed0 + static_cast<std::uint64_t>(i);
        spec.width = size;
        spec.height = size;
        spec.n_shapes = 3;
        spec.min_size = 8;
        spec.max_size = 18;
        const Scene scene = synth_scene(spec);
        data.push_back({scene.image, thin(extract_boundaries(scene.labels))});
    }
    return data;
}

std::map<std::string, std::vector<double>> snapshot(const ModelParams& m) {
    ModelParams mm = m;
    std::map<std::string, std::vector<double>> out;
    for (const auto& blk : all_param_blocks(mm)) out[blk.name] = *blk.data;
    return out;
}

// names of blocks whose bits changed between two snapshots
std::set<std::string> changed_blocks(const std::map<std::string, std::vector<double>>& a,
                                     const std::map<std::string, std::vector<double>>& b) {
    std::set<std::string> out;
    for (const auto& [name, va] : a)
        if (!bits_equal(va, b.at(name))) out.insert(name);
    return out;
}

}  // namespace

TEST_CASE("update_set_blocks: the three conditioning sets") {
    ModelParams m = make_model(tiny_net(), 1);

    const auto names = [](const std::vector<ParamBlockRef>& blocks) {
        std::set<std::string> out;
        for (const auto& b : blocks) out.insert(b.name);
        return out;
    };

    CHECK(names(update_set_blocks(m, LossSelector::side(1))) ==
          std::set<std::string>{"base.s1.c0.w", "base.s1.c0.b", "base.s1.c1.w", "base.s1.c1.b",
                                "side.s0.k1.feat"});

    CHECK(names(update_set_blocks(m, LossSelector::scale(0))) ==
          std::set<std::string>{"base.s0.c0.w", "base.s0.c0.b", "base.s0.c1.w", "base.s0.c1.b",
                                "base.s1.c0.w", "base.s1.c0.b", "base.s1.c1.w", "base.s1.c1.b",
                                "side.s0.k0.feat", "side.s0.k1.feat", "fuse.s0"});

    CHECK(names(update_set_blocks(m, LossSelector::full())) ==
          std::set<std::string>{"side.s0.k0.feat", "side.s0.k1.feat", "fuse.s0",
                                "side.s1.k0.feat", "side.s1.k1.feat", "fuse.s1", "scale"});

    m.learnable_up = true;
    CHECK(names(update_set_blocks(m, LossSelector::side(0))) ==
          std::set<std::string>{"base.s0.c0.w", "base.s0.c0.b", "base.s0.c1.w", "base.s0.c1.b",
                                "side.s0.k0.feat", "side.s0.k0.up"});
}

TEST_CASE("selectors referencing absent stages or scales throw") {
    ModelParams m = make_model(tiny_net(), 2);
    Rng rng(1);
    const TrainSample s = random_sample(rng, 8);
    ModelParams g = zeros_like(m);
    CHECK_THROWS_AS(compute_loss_and_grads(m, s, LossSelector::side(5), 0.9, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(compute_loss_and_grads(m, s, LossSelector::side(-1), 0.9, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(compute_loss_and_grads(m, s, LossSelector::scale(1), 0.9, g),
                    std::invalid_argument);
}

TEST_CASE("zero input: kernel gradients vanish, only biases see signal") {
    ModelParams m = make_model(tiny_net(), 3);
    Rng rng(2);
    TrainSample s = random_sample(rng, 8);
    for (auto& v : s.image.v) v = 0.0;

    ModelParams g = zeros_like(m);
    const double loss = compute_loss_and_grads(m, s, LossSelector::scale(0), 0.9, g);

    // p = 0.5 everywhere: loss is a closed-form mix of ln 2
    std::int64_t n_pos = count_set(s.gt);
    std::int64_t n_neg = 64 - n_pos;
    CHECK(loss == doctest::Approx((0.9 * n_pos + 0.1 * n_neg) * std::log(2.0)).epsilon(1e-12));

    for (int k = 0; k < m.n_stages(); ++k)
        for (std::size_t j = 0; j < g.base.stages[k].convs.size(); ++j)
            for (double v : g.base.stages[k].convs[j].w) CHECK(v == 0.0);
}

TEST_CASE("boundary selector leaves the trunk without gradients") {
    ModelParams m = make_model(tiny_net(), 4);
    Rng rng(3);
    const TrainSample s = random_sample(rng, 8);
    ModelParams g = zeros_like(m);
    compute_loss_and_grads(m, s, LossSelector::full(), 0.9, g);
    for (const auto& st : g.base.stages)
        for (const auto& conv : st.convs) {
            for (double v : conv.w) CHECK(v == 0.0);
            for (double v : conv.b) CHECK(v == 0.0);
        }
    // while the side weights do receive signal
    double side_mag = 0.0;
    for (double v : g.side[0][0].w_feat) side_mag += std::abs(v);
    for (double v : g.w_scale) side_mag += std::abs(v);
    CHECK(side_mag > 0.0);
}

TEST_CASE("grad_check: all three selectors on a small model") {
    ModelParams m = make_model(tiny_net(), 5);
    m.learnable_up = true;  // exercise the upsampling kernels too
    Rng rng(4);
    const TrainSample s = random_sample(rng, 8);
    CHECK(grad_check(m, s, LossSelector::side(0), 0.9) <= 1e-4);
    CHECK(grad_check(m, s, LossSelector::side(1), 0.9) <= 1e-4);
    CHECK(grad_check(m, s, LossSelector::scale(0), 0.9) <= 1e-4);
    CHECK(grad_check(m, s, LossSelector::full(), 0.9) <= 1e-4);
}

TEST_CASE("greedy phase k touches only stage k and its scale-1 head") {
    const auto data = scene_samples(6, 16, 100);
    TrainConfig cfg;
    cfg.net = tiny_net();
    cfg.iters_greedy = 3;
    cfg.batch_size = 2;
    cfg.seed = 9;
    cfg.threads = 1;

    ModelParams m = make_model(cfg.net, cfg.seed);
    const auto before = snapshot(m);
    m = train_greedy_phase(std::move(m), data, cfg, 1);
    const auto after = snapshot(m);

    const std::set<std::string> allowed = {"base.s1.c0.w", "base.s1.c0.b", "base.s1.c1.w",
                                           "base.s1.c1.b", "side.s0.k1.feat"};
    for (const auto& name : changed_blocks(before, after))
        CHECK(allowed.count(name) == 1);
    // and the stage it trains does actually move
    CHECK(changed_blocks(before, after).count("base.s1.c0.w") == 1);
}

TEST_CASE("scale stage: w_scale and foreign-scale heads stay bit-identical") {
    const auto data = scene_samples(6, 16, 200);
    TrainConfig cfg;
    cfg.net = tiny_net();
    cfg.iters_scale = 3;
    cfg.batch_size = 2;
    cfg.seed = 10;
    cfg.threads = 1;

    ModelParams m = make_model(cfg.net, cfg.seed);
    const auto before = snapshot(m);
    m = train_stage_scale(std::move(m), data, cfg);
    const auto after = snapshot(m);
    const auto changed = changed_blocks(before, after);
    CHECK(changed.count("scale") == 0);
    CHECK(changed.count("side.s1.k0.feat") == 0);
    CHECK(changed.count("side.s1.k1.feat") == 0);
    CHECK(changed.count("fuse.s1") == 0);
    CHECK(changed.count("base.s0.c0.w") == 1);

    SUBCASE("zero iterations leave the model untouched") {
        TrainConfig c2 = cfg;
        c2.iters_scale = 0;
        ModelParams m2 = make_model(c2.net, c2.seed);
        const auto b2 = snapshot(m2);
        m2 = train_stage_scale(std::move(m2), data, c2);
        CHECK(changed_blocks(b2, snapshot(m2)).empty());
    }
}

TEST_CASE("multiscale stage: frozen trunk, warm-started heads") {
    const auto data = scene_samples(6, 16, 300);
    TrainConfig cfg;
    cfg.net = tiny_net();
    cfg.iters_fuse = 3;
    cfg.batch_size = 2;
    cfg.seed = 11;
    cfg.threads = 1;

    ModelParams m = make_model(cfg.net, cfg.seed);
    // make the s=1 heads distinctive so the copy is observable
    for (auto& v : m.side[0][0].w_feat) v = 0.25;
    const auto before = snapshot(m);
    m = train_stage_multiscale(std::move(m), data, cfg);
    const auto after = snapshot(m);

    for (const auto& name : changed_blocks(before, after)) {
        CHECK(name.rfind("base.", 0) != 0);  // trunk bit-identical
    }
    CHECK(m.learnable_up);

    SUBCASE("with zero iterations the coarse heads equal the copied scale-1 heads") {
        TrainConfig c2 = cfg;
        c2.iters_fuse = 0;
        ModelParams m2 = make_model(c2.net, c2.seed);
        for (auto& v : m2.side[0][1].w_feat) v = -0.5;
        m2 = train_stage_multiscale(std::move(m2), data, c2);
        CHECK(bits_equal(m2.side[1][1].w_feat, m2.side[0][1].w_feat));
        CHECK(bits_equal(m2.w_fuse[1], m2.w_fuse[0]));
    }
}

TEST_CASE("greedy training reduces each side-output loss") {
    const auto data = scene_samples(10, 16, 400);
    TrainConfig cfg;
    cfg.net = tiny_net();
    cfg.iters_greedy = 60;
    cfg.batch_size = 5;
    cfg.learning_rate = 2e-2;
    cfg.seed = 12;
    cfg.threads = 2;

    ModelParams m = make_model(cfg.net, cfg.seed);
    for (int k = 0; k < m.n_stages(); ++k) {
        const double before = evaluate_loss(m, data, LossSelector::side(k), cfg.beta);
        m = train_greedy_phase(std::move(m), data, cfg, k);
        const double after = evaluate_loss(m, data, LossSelector::side(k), cfg.beta);
        CHECK(after < before);
    }
}

TEST_CASE("scale stage reduces the scale-specific loss") {
    const auto data = scene_samples(10, 16, 500);
    TrainConfig cfg;
    cfg.net = tiny_net();
    cfg.iters_greedy = 40;
    cfg.iters_scale = 60;
    cfg.batch_size = 5;
    cfg.learning_rate = 2e-2;
    cfg.seed = 13;
    cfg.threads = 2;

    ModelParams m = train_stage_greedy(make_model(cfg.net, cfg.seed), data, cfg);
    const double before = evaluate_loss(m, data, LossSelector::scale(0), cfg.beta);
    m = train_stage_scale(std::move(m), data, cfg);
    const double after = evaluate_loss(m, data, LossSelector::scale(0), cfg.beta);
    CHECK(after < before);
}

TEST_CASE("training is deterministic across runs and thread counts") {
    const auto data = scene_samples(6, 16, 600);
    TrainConfig cfg;
    cfg.net = tiny_net();
    cfg.iters_greedy = 4;
    cfg.iters_scale = 4;
    cfg.iters_fuse = 4;
    cfg.batch_size = 3;
    cfg.seed = 14;

    cfg.threads = 1;
    const ModelParams a = train_full(data, cfg);
    cfg.threads = 2;
    const ModelParams b = train_full(data, cfg);
    const auto sa = snapshot(a), sb = snapshot(b);
    for (const auto& [name, va] : sa) CHECK(bits_equal(va, sb.at(name)));
}
