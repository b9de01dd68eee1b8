#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cargen::detail {

// Splits [0, n) into contiguous chunks run on separate threads. `body(begin, end)`
// must only write to per-index state. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t n, std::size_t min_chunk, Body&& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, std::max<std::size_t>(1, n / std::max<std::size_t>(min_chunk, 1)));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t b = t * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      try {
        body(b, e);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cargen::detail
