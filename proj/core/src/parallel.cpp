// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace splatfuse {
namespace {

std::atomic<int> g_max_workers{0};

int resolve_workers() {
  const int configured = g_max_workers.load(std::memory_order_relaxed);
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void set_max_workers(int workers) {
  g_max_workers.store(workers < 0 ? 0 : workers, std::memory_order_relaxed);
}

int max_workers() { return resolve_workers(); }

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  const int workers = std::min<std::int64_t>(resolve_workers(), count);
  if (workers <= 1 || count < 256) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::int64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) {
    const std::int64_t lo = begin + w * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&fn, lo, hi] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  const std::int64_t hi0 = std::min(end, begin + chunk);
  for (std::int64_t i = begin; i < hi0; ++i) fn(i);
  for (auto& t : threads) t.join();
}

}  // namespace splatfuse
