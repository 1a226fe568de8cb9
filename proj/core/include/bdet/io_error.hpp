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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdet {

/// File-format failure, carrying the byte offset where parsing stopped.
class io_error : public std::runtime_error {
public:
    io_error(const std::string& path, std::size_t offset, const std::string& what)
        : std::runtime_error(path + " @" + std::to_string(offset) + ": " + what),
          path_(path), offset_(offset) {}

    const std::string& path() const { return path_; }
    std::size_t offset() const { return offset_; }

private:
    std::string path_;
    std::size_t offset_;
};

}  // namespace bdet
