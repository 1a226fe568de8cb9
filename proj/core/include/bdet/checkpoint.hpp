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

#include "bdet/model.hpp"

namespace bdet {

/// Versioned binary model container: magic, format version, architecture
/// table, then one named section per parameter block (little-endian f64
/// payload + CRC32). Byte-identical for identical models.
void save_model(const ModelParams& m, const std::filesystem::path& path);

/// Throws bdet::io_error (with byte offset) on malformed headers, truncated
/// sections, or checksum mismatches.
ModelParams load_model(const std::filesystem::path& path);

}  // namespace bdet
