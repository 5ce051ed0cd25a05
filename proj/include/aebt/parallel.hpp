#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace aebt {

// Runs body(i) for i in [0, count). Bodies must be independent and write
// only to their own output slots; the result is then identical for every
// thread count. The first exception thrown by a body is rethrown.
inline void parallel_for(int count, int thread_count, const std::function<void(int)>& body) {
  if (count <= 0) return;
  if (thread_count < 1) thread_count = 1;
  if (thread_count == 1 || count == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  const int workers = std::min(thread_count, count);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace aebt
