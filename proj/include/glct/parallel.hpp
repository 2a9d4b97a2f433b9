#ifndef GLCT_PARALLEL_HPP
#define GLCT_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace glct {

/// Partition [0, count) into contiguous chunks, one worker per chunk.
/// fn(worker, begin, end) must only touch state owned by its worker slot;
/// callers combine afterwards (CycValue accumulation is commutative).
template <typename Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    fn(std::size_t(0), std::size_t(0), count);
    return;
  }
  std::size_t width = static_cast<std::size_t>(threads);
  if (width > count) width = count;
  std::vector<std::thread> pool;
  std::size_t chunk = (count + width - 1) / width;
  for (std::size_t t = 0; t < width; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, t, begin, end] { fn(t, begin, end); });
  }
  for (auto& th : pool) th.join();
}

} // namespace glct

#endif
