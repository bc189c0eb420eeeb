#pragma once

#include <cstddef>
#include <functional>

namespace hysbm {

// Worker count: HYSBM_WORKERS if set and positive, else hardware concurrency.
[[nodiscard]] int default_workers();

// Resolves 0 to default_workers().
[[nodiscard]] int resolve_workers(int requested);

// Calls body(i) for i in [0, count) on up to `workers` threads. Each index runs
// exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace hysbm
