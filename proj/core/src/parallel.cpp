#include "curvespace/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace curvespace {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads = std::max(n, 0); }

int max_threads() {
  const int n = g_max_threads;
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int begin, int end, const std::function<void(int)>& f) {
  const int count = end - begin;
  if (count <= 0) return;
  const int workers = std::min(max_threads(), count);
  if (workers == 1) {
    for (int i = begin; i < end; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{begin};
  auto work = [&] {
    for (int i = next++; i < end; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i - begin] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace curvespace
