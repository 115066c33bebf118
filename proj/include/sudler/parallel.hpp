// Deterministic data-parallel reduction over an index range.
//
// The range is cut into fixed-size chunks independent of the thread count; chunk
// results are combined pairwise in a fixed binary tree. Results are therefore
// bit-identical whether one or many workers run.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace sudler::parallel {

/// Worker count: SUDLER_THREADS if set, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("SUDLER_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// fold(lo, hi) -> Acc over [lo, hi); combine(Acc&, Acc&&) merges the right operand into the left.
template <class Acc, class Fold, class Combine>
Acc reduce(std::uint64_t begin, std::uint64_t end, std::uint64_t chunk, Fold fold, Combine combine) {
  if (chunk == 0) chunk = 1;
  const std::uint64_t count = end > begin ? (end - begin + chunk - 1) / chunk : 0;
  if (count == 0) return fold(begin, begin);

  std::vector<std::optional<Acc>> parts(count);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      const std::uint64_t lo = begin + i * chunk;
      const std::uint64_t hi = std::min(end, lo + chunk);
      try {
        parts[i].emplace(fold(lo, hi));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), count));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::uint64_t stride = 1; stride < count; stride *= 2) {
    for (std::uint64_t i = 0; i + stride < count; i += 2 * stride) combine(*parts[i], std::move(*parts[i + stride]));
  }
  return std::move(*parts[0]);
}

}  // namespace sudler::parallel
