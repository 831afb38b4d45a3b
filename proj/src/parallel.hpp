#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace klcells {

// Runs body(begin, end, next) on `jobs` workers. Indices in [0, n) are handed
// out one at a time: a worker starts at `begin` and calls next() for the
// following index until it returns >= end. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned jobs, Body&& body) {
  std::atomic<std::size_t> counter{0};
  auto next = [&] { return counter.fetch_add(1); };
  if (jobs <= 1 || n <= 1) {
    body(next(), n, next);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      try {
        body(next(), n, next);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        counter.store(n);
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace klcells
