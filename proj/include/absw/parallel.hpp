#ifndef ABSW_PARALLEL_HPP
#define ABSW_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace absw {

/// Worker count from ABSW_JOBS when set, else hardware concurrency (>= 1).
int default_jobs();

/// Runs body(i) for i in [0, count) across up to jobs workers. Callers keep
/// determinism by writing only to slot i; merge order is up to them.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

} // namespace absw

#endif
