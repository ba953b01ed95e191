#pragma once

// Index-sliced parallel loop. Work item i writes only to slot i of
// caller-owned storage, and every reduction happens serially afterwards,
// so results are byte-identical for any thread count.

#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fibspec {

/// Program-wide thread override; 0 means consult FIBSPEC_THREADS and then
/// the hardware. The CLI sets this from --threads.
inline int& thread_override() {
  static int v = 0;
  return v;
}

inline int thread_count() {
  if (thread_override() > 0) return thread_override();
  if (const char* s = std::getenv("FIBSPEC_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h > 0 ? static_cast<int>(h) : 1;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int threads = thread_count();
  if (threads <= 1 || n < 1024) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (static_cast<std::size_t>(threads) > n) threads = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int t = 0; t < threads; ++t) {
    std::size_t begin = n * static_cast<std::size_t>(t) /
                        static_cast<std::size_t>(threads);
    std::size_t end = n * static_cast<std::size_t>(t + 1) /
                      static_cast<std::size_t>(threads);
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fibspec
