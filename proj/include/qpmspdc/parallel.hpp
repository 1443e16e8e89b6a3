#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qpmspdc {

/// Runs fn(i) for i in [0, n) on up to `threads` workers with a static
/// contiguous partition. fn must write only to slot i, so results do not
/// depend on the thread count. The first exception is rethrown.
template <class Fn>
void parallelFor(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = n * t / threads;
      const std::size_t hi = n * (t + 1) / threads;
      pool.emplace_back([&, lo, hi, t] {
        try {
          for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace qpmspdc
