#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sparsesm {

/// Worker count: SPARSESM_WORKERS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int default_worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
/// processed exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The exception from the lowest
/// failing index is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  {
    std::vector<std::jthread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace sparsesm
