#include "relreg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace relreg {

std::size_t
thread_count()
{
  if (const char* env = std::getenv("RELREG_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void
parallel_for(std::size_t count,
             const std::function<void(std::size_t)>& body,
             std::size_t threads)
{
  if (count == 0)
    return;
  if (threads == 0)
    threads = thread_count();
  threads = std::min(threads, count);

  std::mutex mutex;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto record = [&](std::size_t i, std::exception_ptr e) {
    std::lock_guard<std::mutex> lock(mutex);
    if (i < failed_index) {
      failed_index = i;
      failure = e;
    }
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        record(i, std::current_exception());
      }
    }
  } else {
    std::atomic<std::size_t> next{ 0 };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            record(i, std::current_exception());
          }
        }
      });
    }
    for (auto& th : pool)
      th.join();
  }
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace relreg
