// Minimal deterministic parallel map: chunks are fixed by index, results land
// in preallocated slots, so output is identical for any thread count.
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <functional>
#include <thread>
#include <vector>

namespace bnls {

inline int& default_thread_count() {
  static int n = static_cast<int>(std::thread::hardware_concurrency());
  return n;
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         int nthreads = 0) {
  if (nthreads <= 0) nthreads = default_thread_count();
  if (nthreads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min<std::size_t>(nthreads, n);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bnls
