#pragma once

#include <cstddef>
#include <functional>

namespace spoofkit {

// Runs fn(0) .. fn(n - 1) on up to `jobs` threads (0 = hardware
// concurrency). Items must be independent. If any item throws, the
// exception from the lowest failing index is rethrown after all workers
// finish, so error reporting does not depend on scheduling.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace spoofkit
