#pragma once

#include <cstddef>
#include <functional>

namespace mkzfrac {

/// Worker count used by parallel_for. Defaults to the hardware concurrency.
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is visited
/// by exactly one call and chunk boundaries do not depend on the thread count
/// beyond partitioning, so bodies that write only their own slots are deterministic.
/// The first exception thrown by any chunk is rethrown on the caller.
void parallel_for(std::size_t n, std::size_t grain, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace mkzfrac
