#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace twosided {

/// Number of worker threads to use when the caller passes 0.
inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs body(i) for i in [0, n) on up to `workers` threads. Results must be
/// written to per-index slots so that scheduling cannot affect them. If any
/// call throws, the exception from the smallest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

  std::exception_ptr first_error;
  std::size_t first_index = n;
  std::mutex error_mutex;
  auto run_one = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (i < first_index) {
        first_index = i;
        first_error = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t begin = next.fetch_add(kChunk);
          if (begin >= n) return;
          const std::size_t end = std::min(n, begin + kChunk);
          for (std::size_t i = begin; i < end; ++i) run_one(i);
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

/// Pairwise (cascade) summation; the result depends only on the order of the
/// input, never on how it was produced.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace twosided
