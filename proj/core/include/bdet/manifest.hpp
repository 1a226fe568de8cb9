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

#include <filesystem>
#include <string>
#include <vector>

namespace bdet {

/// One dataset item. Paths are stored relative to the manifest file; empty
/// fields mean "not present". `labels` is a stem (…/<name>, the loader
/// appends .cat.png/.inst.png).
struct ManifestEntry {
    std::string image;
    std::string labels;
    std::string boundary;
};

struct DatasetManifest {
    std::string split;  // train | val | test
    std::vector<ManifestEntry> entries;
    std::filesystem::path base_dir;  // directory of the manifest file

    std::filesystem::path resolve(const std::string& rel) const { return base_dir / rel; }
};

/// Stem used to pair an entry with external artifacts (prediction files):
/// the image filename without extension, falling back to the other fields.
std::string entry_stem(const ManifestEntry& e);

/// Parses the JSON manifest and verifies every referenced file exists.
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);

}  // namespace bdet
