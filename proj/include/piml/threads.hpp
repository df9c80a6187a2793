#pragma once
// Process-wide worker budget and a deterministic parallel loop.
//
// Results must not depend on the number of workers: parallel_for hands out
// indices from a shared counter, but each index is processed by
// self-contained sequential code that writes to its own slot, so thread
// scheduling cannot change anything observable.

#include <cstddef>
#include <functional>

namespace piml {

// Number of worker threads to use.  Defaults to the hardware concurrency,
// clamped by the PIML_THREADS environment variable; the CLI's --threads
// flag overrides both via set_thread_limit.
int thread_limit();
void set_thread_limit(int n);

// Invoke fn(i) for i in [0, n), spread over the worker budget.  Exceptions
// from fn are collected and the first one rethrown after the loop joins.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace piml
