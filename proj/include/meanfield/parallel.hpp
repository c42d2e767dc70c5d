#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "meanfield/errors.hpp"

namespace meanfield {

// Runs fn(0..n-1) across up to `workers` threads. Work items must not depend
// on execution order; the first exception wins and is rethrown after all
// threads drain. workers <= 1 degrades to a plain loop.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n < 0) throw ValidationError("parallel_for needs a nonnegative count");
  if (workers < 1) throw ValidationError("workers must be at least 1");
  if (workers == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int count = std::min(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (int i = 0; i < count; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace meanfield
