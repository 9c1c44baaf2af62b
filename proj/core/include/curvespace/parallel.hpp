#pragma once

#include <functional>

namespace curvespace {

// Worker cap for parallel_for; 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs f(i) for i in [begin, end). If any calls throw, the exception from the
// lowest index is rethrown after all workers finish.
void parallel_for(int begin, int end, const std::function<void(int)>& f);

}  // namespace curvespace
