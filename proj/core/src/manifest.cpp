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

#include "bdet/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "bdet/io_error.hpp"

namespace bdet {

using nlohmann::json;

std::string entry_stem(const ManifestEntry& e) {
    if (!e.image.empty()) return std::filesystem::path(e.image).stem().string();
    if (!e.labels.empty()) return std::filesystem::path(e.labels).filename().string();
    if (!e.boundary.empty()) return std::filesystem::path(e.boundary).stem().string();
    return {};
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error(path.string(), 0, "cannot open manifest");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw io_error(path.string(), e.byte, std::string("manifest parse error: ") + e.what());
    }

    DatasetManifest m;
    m.base_dir = path.parent_path();
    m.split = j.value("split", "");
    if (!j.contains("entries") || !j["entries"].is_array())
        throw io_error(path.string(), 0, "manifest has no entries array");

    for (const auto& je : j["entries"]) {
        ManifestEntry e;
        e.image = je.value("image", "");
        e.labels = je.value("labels", "");
        e.boundary = je.value("boundary", "");
        if (e.image.empty() && e.labels.empty() && e.boundary.empty())
            throw io_error(path.string(), 0, "manifest entry references no files");

        const auto must_exist = [&](const std::string& rel) {
            if (rel.empty()) return;
            const auto p = m.resolve(rel);
            if (!std::filesystem::exists(p))
                throw io_error(path.string(), 0, "referenced file missing: " + p.string());
        };
        must_exist(e.image);
        must_exist(e.boundary);
        if (!e.labels.empty()) {
            must_exist(e.labels + ".cat.png");
            must_exist(e.labels + ".inst.png");
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    json j;
    j["split"] = m.split;
    j["entries"] = json::array();
    for (const auto& e : m.entries) {
        json je;
        if (!e.image.empty()) je["image"] = e.image;
        if (!e.labels.empty()) je["labels"] = e.labels;
        if (!e.boundary.empty()) je["boundary"] = e.boundary;
        j["entries"].push_back(je);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error(path.string(), 0, "cannot open manifest for writing");
    out << j.dump(2) << "\n";
    if (!out) throw io_error(path.string(), 0, "manifest write failed");
}

}  // namespace bdet
