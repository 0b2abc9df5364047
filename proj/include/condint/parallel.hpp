#pragma once

#include <cstddef>
#include <functional>

namespace condint {

/// 0 means: CONDINT_THREADS if set, else std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Indices are
/// claimed from a shared counter, so callers must write results by index.
/// If any body throws, the exception of the lowest failing index is rethrown
/// after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace condint
