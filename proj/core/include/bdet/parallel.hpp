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

#include <functional>

namespace bdet {

/// Effective worker count: n <= 0 means hardware concurrency.
int resolve_threads(int n);

/// Runs fn(i) for i in [0, n) on up to `threads` workers with static
/// chunking. Callers keep determinism by writing only to per-index slots
/// and reducing in index order afterwards.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace bdet
