// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/parallel.hpp"

#include <doctest.h>

#include <atomic>
#include <vector>

using namespace splatfuse;

TEST_CASE("parallel_for visits every index exactly once") {
  for (int workers : {1, 4}) {
    set_max_workers(workers);
    std::vector<std::atomic<int>> hits(257);
    for (auto& h : hits) h = 0;
    parallel_for(0, 257, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  set_max_workers(0);
}

TEST_CASE("parallel_for handles empty and offset ranges") {
  set_max_workers(4);
  std::atomic<int> count{0};
  parallel_for(5, 5, [&](std::int64_t) { count++; });
  CHECK(count.load() == 0);

  std::atomic<std::int64_t> sum{0};
  parallel_for(10, 20, [&](std::int64_t i) { sum += i; });
  CHECK(sum.load() == 145);
  set_max_workers(0);
}

TEST_CASE("set_max_workers caps and restores") {
  set_max_workers(2);
  CHECK(max_workers() == 2);
  set_max_workers(0);
  CHECK(max_workers() >= 1);
}
