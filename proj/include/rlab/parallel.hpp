#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rlab {

// Runs fn(0..count-1) across `workers` threads, pulling job indices from a
// shared counter. Results must be written to per-job slots so the output is
// identical regardless of scheduling. The first exception thrown by a job is
// rethrown after all threads join.
inline void parallel_for(int count, int workers,
                         const std::function<void(int)>& fn) {
  if (count < 0) {
    throw std::invalid_argument("parallel_for: negative count");
  }
  if (workers < 1) workers = 1;
  if (workers == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(workers, count);
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rlab
