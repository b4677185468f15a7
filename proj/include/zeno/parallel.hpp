// parallel.hpp — minimal work-stealing-free parallel map over an index range.

#pragma once

#include <cstddef>
#include <functional>

namespace zeno {

// requested == 0 resolves to the hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

// Invokes body(i) for i in [0, n). Each index must write only its own slots;
// the partition of indices onto threads carries no ordering guarantees.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace zeno
