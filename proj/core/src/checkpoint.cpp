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

#include "bdet/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

#include "bdet/io_error.hpp"
#include "bdet/train.hpp"

namespace bdet {

namespace {

constexpr char kMagic[8] = {'B', 'D', 'E', 'T', 'M', 'D', 'L', '\0'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

class Writer {
public:
    explicit Writer(const std::filesystem::path& path)
        : path_(path.string()), out_(path, std::ios::binary) {
        if (!out_) throw io_error(path_, 0, "cannot open for writing");
    }

    void bytes(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u16(std::uint16_t v) { bytes(&v, 2); }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void f64(double v) { bytes(&v, 8); }

    void finish() {
        out_.flush();
        if (!out_) throw io_error(path_, 0, "write failed");
    }

private:
    std::string path_;
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) : path_(path.string()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw io_error(path_, 0, "cannot open for reading");
        buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    std::size_t offset() const { return pos_; }

    void bytes(void* p, std::size_t n, const char* what) {
        if (pos_ + n > buf_.size())
            throw io_error(path_, pos_, std::string("truncated file while reading ") + what);
        std::memcpy(p, buf_.data() + pos_, n);
        pos_ += n;
    }
    std::uint8_t u8(const char* what) { std::uint8_t v; bytes(&v, 1, what); return v; }
    std::uint16_t u16(const char* what) { std::uint16_t v; bytes(&v, 2, what); return v; }
    std::uint32_t u32(const char* what) { std::uint32_t v; bytes(&v, 4, what); return v; }
    std::uint64_t u64(const char* what) { std::uint64_t v; bytes(&v, 8, what); return v; }
    double f64(const char* what) { double v; bytes(&v, 8, what); return v; }

    const std::string& path() const { return path_; }
    bool eof() const { return pos_ == buf_.size(); }

private:
    std::string path_;
    std::vector<char> buf_;
    std::size_t pos_ = 0;
};

std::uint32_t payload_crc(const std::vector<double>& v) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(v.data()),
                static_cast<uInt>(v.size() * sizeof(double)));
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

void save_model(const ModelParams& m, const std::filesystem::path& path) {
    Writer w(path);
    w.bytes(kMagic, sizeof(kMagic));
    w.u32(kVersion);

    // architecture table
    w.u32(static_cast<std::uint32_t>(m.base.in_channels));
    w.u32(static_cast<std::uint32_t>(m.n_stages()));
    for (const Stage& st : m.base.stages) {
        w.u32(static_cast<std::uint32_t>(st.convs.size()));
        for (const ConvLayer& c : st.convs) {
            w.u32(static_cast<std::uint32_t>(c.in_ch));
            w.u32(static_cast<std::uint32_t>(c.out_ch));
            w.u32(static_cast<std::uint32_t>(c.kh));
            w.u32(static_cast<std::uint32_t>(c.kw));
        }
    }
    w.u32(static_cast<std::uint32_t>(m.n_scales()));
    for (double s : m.scales) w.f64(s);
    w.u8(m.learnable_up ? 1 : 0);

    // parameter sections
    ModelParams& mm = const_cast<ModelParams&>(m);  // block walk does not mutate
    const auto blocks = all_param_blocks(mm);
    w.u32(static_cast<std::uint32_t>(blocks.size()));
    for (const auto& blk : blocks) {
        w.u16(static_cast<std::uint16_t>(blk.name.size()));
        w.bytes(blk.name.data(), blk.name.size());
        w.u64(blk.data->size());
        w.bytes(blk.data->data(), blk.data->size() * sizeof(double));
        w.u32(payload_crc(*blk.data));
    }
    w.finish();
}

ModelParams load_model(const std::filesystem::path& path) {
    Reader r(path);

    char magic[8];
    r.bytes(magic, sizeof(magic), "magic");
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw io_error(r.path(), 0, "bad magic, not a model checkpoint");
    const std::uint32_t version = r.u32("version");
    if (version != kVersion)
        throw io_error(r.path(), 8, "unsupported checkpoint version " + std::to_string(version));

    NetConfig cfg;
    cfg.in_channels = static_cast<int>(r.u32("in_channels"));
    const std::uint32_t n_stages = r.u32("stage count");
    if (n_stages < 2 || n_stages > 64)
        throw io_error(r.path(), r.offset(), "implausible stage count");
    cfg.stage_widths.clear();
    int convs_per_stage = -1;
    for (std::uint32_t k = 0; k < n_stages; ++k) {
        const std::uint32_t n_convs = r.u32("conv count");
        if (n_convs < 1 || n_convs > 64)
            throw io_error(r.path(), r.offset(), "implausible conv count");
        if (convs_per_stage < 0) convs_per_stage = static_cast<int>(n_convs);
        if (static_cast<int>(n_convs) != convs_per_stage)
            throw io_error(r.path(), r.offset(), "non-uniform convs per stage unsupported");
        int width = 0;
        for (std::uint32_t j = 0; j < n_convs; ++j) {
            r.u32("conv in_ch");
            width = static_cast<int>(r.u32("conv out_ch"));
            const std::uint32_t kh = r.u32("conv kh");
            const std::uint32_t kw = r.u32("conv kw");
            if (kh != 3 || kw != 3)
                throw io_error(r.path(), r.offset(), "only 3x3 trunk kernels supported");
        }
        cfg.stage_widths.push_back(width);
    }
    cfg.convs_per_stage = convs_per_stage;
    const std::uint32_t n_scales = r.u32("scale count");
    if (n_scales < 1 || n_scales > 64)
        throw io_error(r.path(), r.offset(), "implausible scale count");
    cfg.scales.clear();
    for (std::uint32_t s = 0; s < n_scales; ++s) cfg.scales.push_back(r.f64("scale factor"));
    const bool learnable_up = r.u8("learnable_up flag") != 0;

    ModelParams m = make_model(cfg, 0);
    m.learnable_up = learnable_up;

    const auto blocks = all_param_blocks(m);
    const std::uint32_t n_sections = r.u32("section count");
    if (n_sections != blocks.size())
        throw io_error(r.path(), r.offset(),
                       "section count does not match architecture table");
    for (std::uint32_t i = 0; i < n_sections; ++i) {
        const std::uint16_t name_len = r.u16("section name length");
        std::string name(name_len, '\0');
        r.bytes(name.data(), name_len, "section name");
        if (name != blocks[i].name)
            throw io_error(r.path(), r.offset(),
                           "unexpected section '" + name + "' (wanted '" + blocks[i].name + "')");
        const std::uint64_t count = r.u64("section length");
        if (count != blocks[i].data->size())
            throw io_error(r.path(), r.offset(),
                           "section '" + name + "' length mismatch");
        const std::size_t payload_at = r.offset();
        r.bytes(blocks[i].data->data(), count * sizeof(double), "section payload");
        const std::uint32_t crc = r.u32("section checksum");
        if (crc != payload_crc(*blocks[i].data))
            throw io_error(r.path(), payload_at, "checksum mismatch in section '" + name + "'");
    }
    if (!r.eof())
        throw io_error(r.path(), r.offset(), "trailing bytes after final section");
    return m;
}

}  // namespace bdet
