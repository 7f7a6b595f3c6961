#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace barron {

/// Worker cap from BARRON_BRIDGE_THREADS; 0 or unset means hardware
/// concurrency.  Always >= 1.
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n), possibly on
/// several threads.  Callers write into per-index slots so that any reduction
/// afterwards happens in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 64);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f, std::size_t min_chunk = 64) {
  std::vector<T> out(n);
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = f(i);
      },
      min_chunk);
  return out;
}

}  // namespace barron
