#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace entropy_lab {

/// Runs body(begin, end, worker) on `threads` contiguous, statically assigned chunks
/// of [0, n). The partition depends only on (n, threads), so any reduction
/// the caller performs per chunk is reproducible for a fixed thread count.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    body(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
}

}  // namespace entropy_lab
