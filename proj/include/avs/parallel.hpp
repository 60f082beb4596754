#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace avs {

/// Process-wide default worker count used when a call passes `threads == 0`.
/// Starts at 1 so results and timings are reproducible unless asked otherwise.
void set_default_threads(unsigned threads);
unsigned default_threads();

/// Reads AVS_THREADS; returns 0 when unset or unparsable.
unsigned threads_from_env();

struct Parallelism {
  unsigned threads = 0;

  unsigned resolved() const { return threads == 0 ? default_threads() : threads; }
};

/// Splits [0, n) into at most `threads` contiguous chunks and runs
/// `fn(chunk_index, begin, end)` on each. Chunk boundaries depend only on
/// (n, threads, min_chunk), never on scheduling.
template <typename Fn>
void parallel_chunks(std::size_t n, Parallelism par, std::size_t min_chunk, Fn&& fn) {
  if (n == 0) return;
  std::size_t workers = std::max<std::size_t>(1, par.resolved());
  workers = std::min(workers, std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  const std::size_t step = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * step);
      const std::size_t end = std::min(n, begin + step);
      pool.emplace_back([&fn, &failures, w, begin, end] {
        try {
          fn(w, begin, end);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    try {
      fn(std::size_t{0}, std::size_t{0}, std::min(n, step));
    } catch (...) {
      failures[0] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

/// Number of chunks `parallel_chunks` will produce for the same arguments.
inline std::size_t chunk_count(std::size_t n, Parallelism par, std::size_t min_chunk) {
  if (n == 0) return 0;
  std::size_t workers = std::max<std::size_t>(1, par.resolved());
  return std::min(workers, std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
}

}  // namespace avs
