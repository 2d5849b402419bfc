#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace otbyz {

// Resolves a user thread count; 0 means one per hardware thread.
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, n) into fixed chunks of `chunk` items, evaluates
// `work(begin, end)` for each chunk on up to `threads` workers, and folds the
// per-chunk results left-to-right with `merge`. The chunking does not depend
// on the thread count, so the reduction is bit-identical for any `threads`.
template <typename Acc, typename Work, typename Merge>
Acc chunked_reduce(std::size_t n, std::size_t chunk, unsigned threads, Work work, Merge merge) {
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<Acc> partial(n_chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < n_chunks; c = next++) {
      const std::size_t begin = c * chunk;
      partial[c] = work(begin, std::min(n, begin + chunk));
    }
  };
  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n_chunks));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  Acc total{};
  for (auto& p : partial) merge(total, p);
  return total;
}

// Evaluates fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
  if (n_workers <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
}

}  // namespace otbyz
