#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdapprox {

/// Runs task(i) for i in [0, count) on up to `workers` threads and returns the
/// results indexed by i, so any reduction over them is order-independent of
/// scheduling. The first exception thrown by a task is rethrown.
template <class Result, class Task>
std::vector<Result> parallel_map(std::size_t count, int workers, Task task) {
  std::vector<Result> out(count);
  const std::size_t threads =
      std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// Worker count from PD_APPROX_WORKERS, or `fallback` when unset/invalid.
inline int workers_from_env(int fallback = 1) {
  if (const char* s = std::getenv("PD_APPROX_WORKERS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return fallback;
}

}  // namespace pdapprox
