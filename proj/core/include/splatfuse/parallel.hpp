// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>

namespace splatfuse {

// Caps the number of worker threads used by parallel_for. 0 restores the
// hardware default. Thread-safe to call between (not during) parallel regions.
void set_max_workers(int workers);
int max_workers();

// Splits [begin, end) into contiguous chunks, one per worker. Runs inline when
// a single worker is configured or the range is small. fn must be safe to call
// concurrently for disjoint indices.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace splatfuse
