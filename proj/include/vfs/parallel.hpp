#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vfs {

/// Worker count: hardware concurrency, capped by the VFS_THREADS environment variable.
std::size_t worker_count();

namespace detail {

inline std::size_t block_count(std::size_t n) {
  return std::clamp<std::size_t>(n / 1024, 1, worker_count());
}

// Calls block(w, begin, end) for each of `blocks` contiguous slices of [0, n),
// one thread per slice.  The first exception thrown by any slice is rethrown
// on the calling thread after all slices finished.
template <class Block>
void run_blocks(std::size_t n, std::size_t blocks, Block&& block) {
  const std::size_t chunk = (n + blocks - 1) / blocks;
  if (blocks <= 1) {
    block(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(blocks);
    for (std::size_t w = 0; w < blocks; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          block(w, begin, end);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Runs body(begin, end) over a static partition of [0, n).
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  detail::run_blocks(n, detail::block_count(n),
                     [&body](std::size_t, std::size_t begin, std::size_t end) { body(begin, end); });
}

/// Parallel reduction for associative, commutative accumulators (min/max).
/// body(acc, i) folds element i into acc; merge(a, b) folds b into a.
template <class Acc, class Body, class Merge>
Acc parallel_reduce(std::size_t n, const Acc& init, Body&& body, Merge&& merge) {
  const std::size_t blocks = detail::block_count(n);
  std::vector<Acc> partial(blocks, init);
  detail::run_blocks(n, blocks, [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(partial[w], i);
  });
  Acc out = init;
  for (const auto& p : partial) merge(out, p);
  return out;
}

}  // namespace vfs
