#pragma once

#include <cstddef>
#include <functional>

namespace mmhb {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Each index is visited exactly once;
// callers write results into slot i, so output order never depends on scheduling.
// The exception from the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

int default_jobs();

}  // namespace mmhb
