// Copyright 2026 The stabbell developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace stabbell {

inline int default_thread_count() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(chunk_index, begin, end) over a partition of [0, total) on
/// `threads` workers. The per-chunk results must be merged by the caller in
/// chunk order, which keeps reductions deterministic regardless of thread
/// scheduling.
template <typename Fn>
void parallel_chunks(std::int64_t total, int threads, Fn&& fn) {
  threads = std::max<int>(1, static_cast<int>(std::min<std::int64_t>(threads, total ? total : 1)));
  if (threads == 1) {
    fn(0, std::int64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t step = (total + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t b = t * step;
    const std::int64_t e = std::min<std::int64_t>(total, b + step);
    if (b >= e) break;
    pool.emplace_back([&fn, t, b, e] { fn(t, b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace stabbell
