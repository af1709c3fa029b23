#pragma once

#include <cstddef>
#include <functional>

namespace isingms {

// Runs fn(i) for i in [0, count) on up to `jobs` worker threads. Indices are
// distributed statically; the first exception thrown by any worker is
// rethrown in the caller after all workers have joined.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

// Worker count: ISINGMS_JOBS environment variable if set, otherwise the
// hardware concurrency (at least 1).
int default_jobs();

}  // namespace isingms
