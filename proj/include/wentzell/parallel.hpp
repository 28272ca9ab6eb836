// Copyright 2026 The wentzell authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace wentzell {

/// Global cap on worker threads used by assembly and diagnostics.
/// A value of 0 means "use hardware concurrency".
void set_thread_budget(unsigned n);
unsigned thread_budget();

/// Splits [0, n) into `chunks` contiguous ranges and runs fn(begin, end,
/// chunk) for each. Chunk boundaries depend only on n and chunks, so the
/// partition is reproducible; execution order across threads is not.
void parallel_chunks(std::size_t n, unsigned chunks,
                     const std::function<void(std::size_t, std::size_t, unsigned)> &fn);

/// Same as parallel_chunks with one chunk per available worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, unsigned)> &fn);

} // namespace wentzell
