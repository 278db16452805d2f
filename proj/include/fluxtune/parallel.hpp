#pragma once

#include <cstddef>
#include <functional>

namespace fluxtune {

// Global worker count for sweep evaluation. 0 picks the hardware default.
void set_worker_threads(int n);
int worker_threads();

// Runs body(i) for i in [0, count). Bodies must only write state owned by
// their own index; under that contract the result is identical for any
// worker count. Nested calls from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fluxtune
