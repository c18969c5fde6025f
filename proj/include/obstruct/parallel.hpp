#ifndef OBSTRUCT_PARALLEL_HPP
#define OBSTRUCT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace obstruct {

// Worker count: OBSTRUCT_THREADS if set and positive, else the hardware
// concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, count) across worker_count() threads. Callers
// write results into per-index slots so the outcome does not depend on
// scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace obstruct

#endif  // OBSTRUCT_PARALLEL_HPP
