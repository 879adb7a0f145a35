#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace a2lab {

inline int thread_budget() {
  if (const char* env = std::getenv("A2LAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Index-sharded parallel for with deterministic result order: body(i) runs
/// on some thread, results land in slot i.
template <typename Result>
std::vector<Result> parallel_map(int count, const std::function<Result(int)>& body) {
  std::vector<Result> results(count);
  int threads = std::min(thread_budget(), std::max(count, 1));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) results[i] = body(i);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) results[i] = body(i);
    });
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace a2lab
