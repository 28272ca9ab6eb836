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

#include "wentzell/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wentzell {

namespace {
std::atomic<unsigned> g_budget{0};
}

void set_thread_budget(unsigned n) { g_budget = n; }

unsigned thread_budget() {
  unsigned b = g_budget.load();
  if (b == 0)
    b = std::max(1u, std::thread::hardware_concurrency());
  return b;
}

void parallel_chunks(std::size_t n, unsigned chunks,
                     const std::function<void(std::size_t, std::size_t, unsigned)> &fn) {
  chunks = std::max(1u, chunks);
  const unsigned workers = std::min(chunks, thread_budget());
  auto range = [&](unsigned c) {
    const std::size_t b = n * c / chunks;
    const std::size_t e = n * (c + 1) / chunks;
    return std::pair{b, e};
  };
  if (workers <= 1) {
    for (unsigned c = 0; c < chunks; ++c) {
      auto [b, e] = range(c);
      fn(b, e, c);
    }
    return;
  }
  std::atomic<unsigned> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (unsigned c = next++; c < chunks; c = next++) {
        try {
          auto [b, e] = range(c);
          fn(b, e, c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, unsigned)> &fn) {
  parallel_chunks(n, thread_budget(), fn);
}

} // namespace wentzell
