#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace kstab::detail {

// Applies fn(i) for i in [0, count) across at most `jobs` threads, in
// contiguous index blocks. fn must write only to per-index slots; callers do
// any order-dependent reduction serially afterwards, which keeps results
// independent of the thread count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (count == 0) return;
  if (jobs <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(jobs, count);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (std::thread& thread : threads) thread.join();
}

}  // namespace kstab::detail
