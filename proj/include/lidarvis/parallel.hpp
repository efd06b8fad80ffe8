// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lidarvis {

/// Number of workers to use when the caller asks for "all cores".
inline int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs body(begin, end) over [0, count) in chunks of `grain`, pulled from a
/// shared counter by `workers` threads. The calling thread is one of the
/// workers. The first exception thrown by any chunk is rethrown after all
/// workers have joined.
template <typename Body>
void parallel_for_chunks(std::size_t count, int workers, std::size_t grain, Body&& body) {
  if (count == 0) return;
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t chunks = (count + grain - 1) / grain;
  const auto threads = static_cast<std::size_t>(std::clamp<long long>(
      workers, 1, static_cast<long long>(chunks)));
  if (threads == 1) {
    body(std::size_t{0}, count);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      const std::size_t begin = c * grain;
      try {
        body(begin, std::min(count, begin + grain));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lidarvis
