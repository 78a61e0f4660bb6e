#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "summation.hpp"

namespace charsum {

// Fixed-width worker pool owned by the harness. Library code receives it
// through Parallelism and never starts threads of its own.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned width);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  unsigned width() const noexcept { return width_; }

  // Calls body(i) for every i in [0, count) and waits. Work submitted from
  // inside a worker runs inline. The exception of the lowest failing index is
  // rethrown.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

 private:
  struct Batch;
  void worker_loop();
  void drain(Batch& batch);

  unsigned width_;
  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  Batch* current_ = nullptr;
  std::uint64_t generation_ = 0;
  bool stopping_ = false;
  std::mutex submit_mutex_;
};

struct Parallelism {
  ThreadPool* pool = nullptr;
  std::uint64_t block_size = 1u << 14;

  void for_each(std::size_t count, const std::function<void(std::size_t)>& body) const {
    if (pool == nullptr || count <= 1) {
      for (std::size_t i = 0; i < count; ++i) body(i);
    } else {
      pool->parallel_for(count, body);
    }
  }
};

// Pairwise reduction whose shape depends only on parts.size().
template <class T, class Combine>
T tree_reduce(std::vector<T> parts, Combine combine) {
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      T merged = std::move(parts[i]);
      combine(merged, parts[i + 1]);
      next.push_back(std::move(merged));
    }
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

// Sums over the integer range [first, last] split into blocks of
// par.block_size consecutive indices. body(lo, hi, acc) adds the terms for
// [lo, hi]. The result depends on the range and block size, never on the
// number of threads.
template <class Body>
SumValue blocked_sum(std::int64_t first, std::int64_t last, const Parallelism& par, Body&& body) {
  if (last < first) return {};
  const std::uint64_t span = static_cast<std::uint64_t>(last - first) + 1;
  const std::uint64_t block = par.block_size == 0 ? span : par.block_size;
  const std::size_t blocks = static_cast<std::size_t>((span + block - 1) / block);
  std::vector<SumAccumulator> parts(blocks);
  par.for_each(blocks, [&](std::size_t b) {
    const std::int64_t lo = first + static_cast<std::int64_t>(b * block);
    const std::int64_t hi = b + 1 == blocks ? last : lo + static_cast<std::int64_t>(block) - 1;
    body(lo, hi, parts[b]);
  });
  SumAccumulator total = tree_reduce(std::move(parts), [](SumAccumulator& a, const SumAccumulator& b) { a.merge(b); });
  return total.result();
}

}  // namespace charsum
