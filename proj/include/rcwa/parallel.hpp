#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rcwa {

inline int default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work items must be
// independent; the first exception thrown by any item is rethrown here after
// all threads join.
inline void parallel_for(long count, int jobs, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  if (jobs <= 1 || count == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  int nthreads = static_cast<int>(std::min<long>(jobs, count));
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      long i = next.fetch_add(1);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace rcwa
