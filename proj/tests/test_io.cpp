#include <doctest.h>

#include <unistd.h>
#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bdet/checkpoint.hpp"
#include "bdet/config.hpp"
#include "bdet/image_io.hpp"
#include "bdet/io_error.hpp"
#include "bdet/manifest.hpp"
#include "bdet/png_io.hpp"
#include "bdet/train.hpp"
#include "test_util.hpp"

using namespace bdet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("bdet_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    fs::path operator/(const std::string& name) const { return path / name; }
};

std::vector<std::uint8_t> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("png: gray8/gray16/rgb8 round trips") {
    TempDir dir;
    Rng rng(41);

    png::PngImage g8;
    g8.width = 13;
    g8.height = 9;
    g8.bit_depth = 8;
    g8.channels = 1;
    for (int i = 0; i < 13 * 9; ++i) g8.samples.push_back(rng.uniform_int(0, 255));
    png::write_png(dir / "g8.png", g8);
    const auto r8 = png::read_png(dir / "g8.png");
    CHECK(r8.samples == g8.samples);
    CHECK(r8.bit_depth == 8);

    png::PngImage g16;
    g16.width = 7;
    g16.height = 11;
    g16.bit_depth = 16;
    g16.channels = 1;
    for (int i = 0; i < 7 * 11; ++i) g16.samples.push_back(rng.uniform_int(0, 65535));
    png::write_png(dir / "g16.png", g16);
    const auto r16 = png::read_png(dir / "g16.png");
    CHECK(r16.samples == g16.samples);
    CHECK(r16.bit_depth == 16);

    png::PngImage rgb;
    rgb.width = 5;
    rgb.height = 6;
    rgb.bit_depth = 8;
    rgb.channels = 3;
    for (int i = 0; i < 5 * 6 * 3; ++i) rgb.samples.push_back(rng.uniform_int(0, 255));
    png::write_png(dir / "rgb.png", rgb);
    const auto rr = png::read_png(dir / "rgb.png");
    CHECK(rr.samples == rgb.samples);
    CHECK(rr.channels == 3);
}

TEST_CASE("png: writes are byte-identical across calls") {
    TempDir dir;
    Rng rng(43);
    png::PngImage img;
    img.width = 16;
    img.height = 16;
    img.bit_depth = 8;
    img.channels = 1;
    for (int i = 0; i < 256; ++i) img.samples.push_back(rng.uniform_int(0, 255));
    png::write_png(dir / "a.png", img);
    png::write_png(dir / "b.png", img);
    CHECK(slurp(dir / "a.png") == slurp(dir / "b.png"));
}

TEST_CASE("png: structured errors carry offsets") {
    TempDir dir;
    png::PngImage img;
    img.width = 4;
    img.height = 4;
    img.bit_depth = 8;
    img.channels = 1;
    img.samples.assign(16, 100);
    png::write_png(dir / "ok.png", img);
    auto bytes = slurp(dir / "ok.png");

    SUBCASE("bad signature is a malformed header") {
        auto bad = bytes;
        bad[0] = 'X';
        spit(dir / "bad.png", bad);
        CHECK_THROWS_WITH_AS(png::read_png(dir / "bad.png"),
                             doctest::Contains("malformed header"), io_error);
    }
    SUBCASE("flipped payload byte is a checksum mismatch") {
        auto bad = bytes;
        bad[8 + 8 + 4] ^= 0xff;  // first IHDR data byte
        spit(dir / "bad.png", bad);
        try {
            png::read_png(dir / "bad.png");
            FAIL("expected io_error");
        } catch (const io_error& e) {
            CHECK(std::string(e.what()).find("checksum mismatch") != std::string::npos);
            CHECK(e.offset() > 0);
        }
    }
    SUBCASE("truncation is reported") {
        auto bad = bytes;
        bad.resize(bad.size() - 6);
        spit(dir / "bad.png", bad);
        CHECK_THROWS_WITH_AS(png::read_png(dir / "bad.png"), doctest::Contains("truncated"),
                             io_error);
    }
    SUBCASE("oversized dimensions are rejected") {
        // craft an IHDR claiming 2^25 x 2^25 with a fixed-up CRC
        auto bad = bytes;
        bad[16] = 0x02;  // width msb -> 0x02000000
        bad[17] = bad[18] = bad[19] = 0x00;
        bad[20] = 0x02;
        bad[21] = bad[22] = bad[23] = 0x00;
        // recompute the IHDR chunk CRC so only the dimension check can fire
        unsigned long crc = crc32(0L, nullptr, 0);
        crc = crc32(crc, &bad[12], 4 + 13);
        bad[29] = static_cast<std::uint8_t>(crc >> 24);
        bad[30] = static_cast<std::uint8_t>(crc >> 16);
        bad[31] = static_cast<std::uint8_t>(crc >> 8);
        bad[32] = static_cast<std::uint8_t>(crc);
        spit(dir / "bad.png", bad);
        CHECK_THROWS_WITH_AS(png::read_png(dir / "bad.png"),
                             doctest::Contains("dimension overflow"), io_error);
    }
}

TEST_CASE("label map round trip") {
    TempDir dir;
    Rng rng(44);
    const LabelMap lm = testutil::random_label_map(rng, 9, 7, 500, 30);
    save_label_map(lm, dir / "scene");
    const LabelMap back = load_label_map(dir / "scene");
    CHECK(back.category == lm.category);
    CHECK(back.instance == lm.instance);
}

TEST_CASE("label map: mismatched grids are rejected at load") {
    TempDir dir;
    Rng rng(45);
    save_label_map(testutil::random_label_map(rng, 6, 6, 5, 2), dir / "a");
    save_label_map(testutil::random_label_map(rng, 7, 6, 5, 2), dir / "b");
    fs::copy_file(dir / "b.inst.png", dir / "a.inst.png", fs::copy_options::overwrite_existing);
    CHECK_THROWS_AS(load_label_map(dir / "a"), io_error);
}

TEST_CASE("boundary map round trip") {
    TempDir dir;
    Rng rng(46);
    const BoundaryMap bm = testutil::random_mask(rng, 12, 8, 25);
    save_boundary_map(bm, dir / "b.png");
    CHECK(load_boundary_map(dir / "b.png") == bm);
}

TEST_CASE("soft map quantization bound") {
    TempDir dir;
    Rng rng(47);
    SoftBoundaryMap sm(10, 10);
    for (auto& v : sm.data()) v = rng.uniform01();
    save_soft_map(sm, dir / "s.png");
    const SoftBoundaryMap back = load_soft_map(dir / "s.png");
    for (std::size_t i = 0; i < sm.size(); ++i)
        CHECK(std::abs(back.data()[i] - sm.data()[i]) <= 1.0 / 510.0 + 1e-12);
    // a second save/load is the identity (values already on the grid)
    save_soft_map(back, dir / "s2.png");
    CHECK(load_soft_map(dir / "s2.png") == back);
}

TEST_CASE("rgb image round trip with quantization") {
    TempDir dir;
    Rng rng(48);
    Tensor img(3, 6, 5);
    for (auto& v : img.v) v = rng.uniform01();
    save_image_rgb(img, dir / "img.png");
    const Tensor back = load_image_rgb(dir / "img.png");
    for (std::size_t i = 0; i < img.v.size(); ++i)
        CHECK(std::abs(back.v[i] - img.v[i]) <= 1.0 / 510.0 + 1e-12);
}

TEST_CASE("checkpoint: round trip is bit-exact") {
    TempDir dir;
    NetConfig net;
    net.stage_widths = {4, 6, 8};
    net.scales = {1.0, 0.8, 0.5};
    ModelParams m = make_model(net, 123);
    m.learnable_up = true;
    save_model(m, dir / "m.ckpt");
    ModelParams back = load_model(dir / "m.ckpt");

    CHECK(back.learnable_up == m.learnable_up);
    CHECK(back.scales == m.scales);
    auto ba = all_param_blocks(m);
    auto bb = all_param_blocks(back);
    REQUIRE(ba.size() == bb.size());
    for (std::size_t i = 0; i < ba.size(); ++i)
        CHECK(testutil::bits_equal(*ba[i].data, *bb[i].data));

    SUBCASE("checkpoint writes are byte-identical") {
        save_model(m, dir / "m2.ckpt");
        CHECK(slurp(dir / "m.ckpt") == slurp(dir / "m2.ckpt"));
    }
    SUBCASE("payload corruption is a named checksum failure") {
        auto bytes = slurp(dir / "m.ckpt");
        bytes[bytes.size() / 2] ^= 0x01;
        spit(dir / "bad.ckpt", bytes);
        CHECK_THROWS_WITH_AS(load_model(dir / "bad.ckpt"), doctest::Contains("checksum"),
                             io_error);
    }
    SUBCASE("truncation is reported with context") {
        auto bytes = slurp(dir / "m.ckpt");
        bytes.resize(bytes.size() - 9);
        spit(dir / "bad.ckpt", bytes);
        CHECK_THROWS_WITH_AS(load_model(dir / "bad.ckpt"), doctest::Contains("truncated"),
                             io_error);
    }
    SUBCASE("foreign magic is rejected") {
        auto bytes = slurp(dir / "m.ckpt");
        bytes[0] = 'Z';
        spit(dir / "bad.ckpt", bytes);
        CHECK_THROWS_WITH_AS(load_model(dir / "bad.ckpt"), doctest::Contains("magic"), io_error);
    }
}

TEST_CASE("manifest: save, load, stems, and missing files") {
    TempDir dir;
    fs::create_directories(dir / "img");
    Rng rng(49);
    Tensor img(3, 4, 4, 0.5);
    save_image_rgb(img, dir.path / "img" / "scene_000.png");
    save_boundary_map(BoundaryMap(4, 4, 0), dir.path / "img" / "scene_000.b.png");

    DatasetManifest m;
    m.split = "test";
    m.entries.push_back({"img/scene_000.png", "", "img/scene_000.b.png"});
    save_manifest(m, dir / "test.json");

    const DatasetManifest back = load_manifest(dir / "test.json");
    CHECK(back.split == "test");
    REQUIRE(back.entries.size() == 1);
    CHECK(back.entries[0].image == "img/scene_000.png");
    CHECK(entry_stem(back.entries[0]) == "scene_000");
    CHECK(back.resolve(back.entries[0].boundary) == dir.path / "img" / "scene_000.b.png");

    SUBCASE("missing referenced file fails the load") {
        m.entries.push_back({"img/absent.png", "", ""});
        save_manifest(m, dir / "bad.json");
        CHECK_THROWS_WITH_AS(load_manifest(dir / "bad.json"), doctest::Contains("missing"),
                             io_error);
    }
}

TEST_CASE("config: dump and re-apply round trips") {
    TempDir dir;
    ToolConfig cfg;
    cfg.seed = 99;
    cfg.learning_rate = 0.125;
    cfg.scales = "1,0.5";
    {
        std::ofstream out(dir / "a.cfg");
        dump_config(cfg, out);
    }
    ToolConfig cfg2;
    apply_config_file(cfg2, dir / "a.cfg");
    std::ostringstream da, db;
    dump_config(cfg, da);
    dump_config(cfg2, db);
    CHECK(da.str() == db.str());
}

TEST_CASE("config: unknown keys and malformed lines carry line numbers") {
    TempDir dir;
    {
        std::ofstream out(dir / "bad.cfg");
        out << "# comment\n";
        out << "seed=4\n";
        out << "no_such_key=1\n";
    }
    ToolConfig cfg;
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, dir / "bad.cfg"), doctest::Contains(":3"),
                         std::invalid_argument);
    {
        std::ofstream out(dir / "bad2.cfg");
        out << "seed\n";
    }
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, dir / "bad2.cfg"),
                         doctest::Contains("key=value"), std::invalid_argument);
}

TEST_CASE("config: helpers") {
    CHECK(parse_double_list("1,0.8,0.5") == std::vector<double>{1.0, 0.8, 0.5});
    CHECK(parse_int_list("8,16,32") == std::vector<int>{8, 16, 32});
    CHECK(connectivity_from("four") == Connectivity::four);
    CHECK(connectivity_from("eight") == Connectivity::eight);
    CHECK_THROWS_AS(connectivity_from("six"), std::invalid_argument);

    ToolConfig cfg;
    CHECK(config_d_max(cfg, 300, 400) == doctest::Approx(0.0075 * 500));
    cfg.d_max = 2.0;
    CHECK(config_d_max(cfg, 300, 400) == 2.0);
}
