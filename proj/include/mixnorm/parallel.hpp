#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace mixnorm {

// MIXNORM_THREADS, else the hardware concurrency
inline int thread_count() {
  if (const char* s = std::getenv("MIXNORM_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// body(i) for i in [0, n); strided assignment so results stored by index stay deterministic
template <class F>
void parallel_for(int n, F&& body) {
  const int T = std::min(thread_count(), n);
  if (T <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errs(T);
  std::vector<std::thread> pool;
  for (int t = 0; t < T; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += T) body(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace mixnorm
