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

#include "bdet/png_io.hpp"

#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <fstream>

#include "bdet/io_error.hpp"

namespace bdet::png {

namespace {

constexpr std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};
constexpr std::size_t kMaxDim = 1 << 24;
constexpr std::size_t kMaxPixels = std::size_t{1} << 28;

std::uint32_t be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t chunk_crc(const char type[4], const std::uint8_t* data, std::size_t n) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
    if (n > 0) crc = crc32(crc, data, static_cast<uInt>(n));
    return static_cast<std::uint32_t>(crc);
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::uint8_t* data, std::size_t n) {
    put_be32(out, static_cast<std::uint32_t>(n));
    out.insert(out.end(), type, type + 4);
    if (n > 0) out.insert(out.end(), data, data + n);
    put_be32(out, chunk_crc(type, data, n));
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

}  // namespace

PngImage read_png(const std::filesystem::path& path) {
    const std::string name = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(name, 0, "cannot open for reading");
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

    if (buf.size() < 8 || std::memcmp(buf.data(), kSignature, 8) != 0)
        throw io_error(name, 0, "malformed header: not a PNG signature");

    PngImage img;
    bool have_ihdr = false, have_iend = false;
    std::vector<std::uint8_t> idat;
    std::size_t pos = 8;

    while (pos < buf.size()) {
        if (pos + 8 > buf.size())
            throw io_error(name, pos, "truncated chunk header");
        const std::uint32_t len = be32(&buf[pos]);
        const char* type = reinterpret_cast<const char*>(&buf[pos + 4]);
        const std::size_t data_at = pos + 8;
        if (data_at + len + 4 > buf.size())
            throw io_error(name, pos, "truncated chunk body");
        const std::uint32_t want_crc = be32(&buf[data_at + len]);
        const std::uint32_t got_crc = chunk_crc(type, &buf[data_at], len);
        if (want_crc != got_crc)
            throw io_error(name, data_at + len,
                           std::string("checksum mismatch in chunk ") + std::string(type, 4));

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (have_ihdr) throw io_error(name, pos, "duplicate IHDR");
            if (len != 13) throw io_error(name, data_at, "malformed header: IHDR length");
            const std::uint32_t w = be32(&buf[data_at]);
            const std::uint32_t h = be32(&buf[data_at + 4]);
            const int depth = buf[data_at + 8];
            const int color = buf[data_at + 9];
            const int comp = buf[data_at + 10];
            const int filt = buf[data_at + 11];
            const int interlace = buf[data_at + 12];
            if (w == 0 || h == 0) throw io_error(name, data_at, "malformed header: zero dimension");
            if (w > kMaxDim || h > kMaxDim ||
                static_cast<std::size_t>(w) * static_cast<std::size_t>(h) > kMaxPixels)
                throw io_error(name, data_at, "dimension overflow");
            if (comp != 0 || filt != 0)
                throw io_error(name, data_at + 10, "unsupported compression/filter method");
            if (interlace != 0)
                throw io_error(name, data_at + 12, "interlaced PNG unsupported");
            if (color == 0) {
                if (depth != 8 && depth != 16)
                    throw io_error(name, data_at + 8, "unsupported grayscale bit depth");
                img.channels = 1;
            } else if (color == 2) {
                if (depth != 8)
                    throw io_error(name, data_at + 8, "unsupported rgb bit depth");
                img.channels = 3;
            } else {
                throw io_error(name, data_at + 9, "unsupported color type");
            }
            img.width = static_cast<int>(w);
            img.height = static_cast<int>(h);
            img.bit_depth = depth;
            have_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            if (!have_ihdr) throw io_error(name, pos, "IDAT before IHDR");
            idat.insert(idat.end(), &buf[data_at], &buf[data_at + len]);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            have_iend = true;
            pos = data_at + len + 4;
            break;
        }
        // ancillary chunks are skipped
        pos = data_at + len + 4;
    }
    if (!have_ihdr) throw io_error(name, buf.size(), "missing IHDR");
    if (!have_iend) throw io_error(name, buf.size(), "missing IEND");
    if (idat.empty()) throw io_error(name, buf.size(), "missing IDAT payload");

    const std::size_t bytes_per_sample = static_cast<std::size_t>(img.bit_depth) / 8;
    const std::size_t bpp = bytes_per_sample * static_cast<std::size_t>(img.channels);
    const std::size_t row_bytes = bpp * static_cast<std::size_t>(img.width);
    const std::size_t raw_size = (row_bytes + 1) * static_cast<std::size_t>(img.height);

    std::vector<std::uint8_t> raw(raw_size);
    uLongf out_len = static_cast<uLongf>(raw_size);
    const int zret = uncompress(raw.data(), &out_len, idat.data(), static_cast<uLong>(idat.size()));
    if (zret != Z_OK || out_len != raw_size)
        throw io_error(name, 8, "IDAT decompression failed or size mismatch");

    // de-filter in place into a separate raster
    std::vector<std::uint8_t> pix(row_bytes * static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t* src = &raw[(row_bytes + 1) * static_cast<std::size_t>(y)];
        const int filter = src[0];
        ++src;
        std::uint8_t* dst = &pix[row_bytes * static_cast<std::size_t>(y)];
        const std::uint8_t* prev = y > 0 ? &pix[row_bytes * static_cast<std::size_t>(y - 1)] : nullptr;
        for (std::size_t i = 0; i < row_bytes; ++i) {
            const int a = i >= bpp ? dst[i - bpp] : 0;
            const int b = prev ? prev[i] : 0;
            const int c = (prev && i >= bpp) ? prev[i - bpp] : 0;
            int v = src[i];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default:
                    throw io_error(name, 8, "unknown scanline filter type");
            }
            dst[i] = static_cast<std::uint8_t>(v & 0xff);
        }
    }

    img.samples.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
    const std::size_t n = img.samples.size();
    if (img.bit_depth == 8) {
        for (std::size_t i = 0; i < n; ++i) img.samples[i] = pix[i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            img.samples[i] = static_cast<std::uint16_t>((pix[2 * i] << 8) | pix[2 * i + 1]);
    }
    return img;
}

void write_png(const std::filesystem::path& path, const PngImage& img) {
    const std::string name = path.string();
    if (img.width < 1 || img.height < 1)
        throw io_error(name, 0, "refusing to write empty image");
    if ((img.channels != 1 && img.channels != 3) ||
        (img.bit_depth != 8 && img.bit_depth != 16) ||
        (img.channels == 3 && img.bit_depth != 8))
        throw io_error(name, 0, "unsupported format combination");
    if (img.samples.size() !=
        static_cast<std::size_t>(img.width) * img.height * img.channels)
        throw io_error(name, 0, "sample buffer does not match dimensions");

    const std::size_t bytes_per_sample = static_cast<std::size_t>(img.bit_depth) / 8;
    const std::size_t bpp = bytes_per_sample * static_cast<std::size_t>(img.channels);
    const std::size_t row_bytes = bpp * static_cast<std::size_t>(img.width);

    std::vector<std::uint8_t> raw((row_bytes + 1) * static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* dst = &raw[(row_bytes + 1) * static_cast<std::size_t>(y)];
        *dst++ = 0;  // filter: none
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const std::uint16_t v = img.at(x, y, c);
                if (img.bit_depth == 8) {
                    *dst++ = static_cast<std::uint8_t>(v & 0xff);
                } else {
                    *dst++ = static_cast<std::uint8_t>(v >> 8);
                    *dst++ = static_cast<std::uint8_t>(v & 0xff);
                }
            }
        }
    }

    uLongf comp_cap = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_cap);
    if (compress2(comp.data(), &comp_cap, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw io_error(name, 0, "deflate failed");
    comp.resize(comp_cap);

    std::vector<std::uint8_t> out;
    out.reserve(comp.size() + 128);
    out.insert(out.end(), kSignature, kSignature + 8);

    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(img.width >> 24);
    ihdr[1] = static_cast<std::uint8_t>(img.width >> 16);
    ihdr[2] = static_cast<std::uint8_t>(img.width >> 8);
    ihdr[3] = static_cast<std::uint8_t>(img.width);
    ihdr[4] = static_cast<std::uint8_t>(img.height >> 24);
    ihdr[5] = static_cast<std::uint8_t>(img.height >> 16);
    ihdr[6] = static_cast<std::uint8_t>(img.height >> 8);
    ihdr[7] = static_cast<std::uint8_t>(img.height);
    ihdr[8] = static_cast<std::uint8_t>(img.bit_depth);
    ihdr[9] = img.channels == 1 ? 0 : 2;
    ihdr[10] = 0;
    ihdr[11] = 0;
    ihdr[12] = 0;
    append_chunk(out, "IHDR", ihdr, sizeof(ihdr));
    append_chunk(out, "IDAT", comp.data(), comp.size());
    append_chunk(out, "IEND", nullptr, 0);

    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error(name, 0, "cannot open for writing");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    f.flush();
    if (!f) throw io_error(name, 0, "write failed");
}

}  // namespace bdet::png
