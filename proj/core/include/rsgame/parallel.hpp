#pragma once

#include <functional>

namespace rsgame {

// Worker cap shared by all parallel loops. Resolution order: explicit
// set_max_threads() (CLI --threads), RSGAME_THREADS, hardware concurrency.
int max_threads();
void set_max_threads(int n);

// Runs fn(i) for i in [begin, end). Each index writes only its own output
// slots, so the result is identical for any worker count; callers needing a
// reduction do it afterwards in fixed index order.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace rsgame
