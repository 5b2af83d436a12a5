#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace minmax {

/// Worker count: MINMAX_THREADS when set to a positive integer, else the
/// machine's hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("MINMAX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Splits [0, n) into contiguous chunks and runs fn(chunk, begin, end) on each,
/// one thread per chunk. Returns the number of chunks. The first exception
/// thrown by any chunk is rethrown after all threads finish.
template <class Fn>
int parallel_chunks(std::size_t n, Fn&& fn, int workers = worker_count()) {
  const int chunks = static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(n, std::max(1, workers))));
  if (chunks == 1) {
    fn(0, std::size_t{0}, n);
    return 1;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  for (int c = 0; c < chunks; ++c) {
    const std::size_t begin = n * static_cast<std::size_t>(c) / static_cast<std::size_t>(chunks);
    const std::size_t end = n * static_cast<std::size_t>(c + 1) / static_cast<std::size_t>(chunks);
    pool.emplace_back([&, c, begin, end] {
      try {
        fn(c, begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return chunks;
}

}  // namespace minmax
