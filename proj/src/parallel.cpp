#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>

namespace charsum {

namespace {
thread_local bool inside_worker = false;
}

struct ThreadPool::Batch {
  std::size_t count = 0;
  const std::function<void(std::size_t)>* body = nullptr;
  std::atomic<std::size_t> next{0};
  std::size_t finished = 0;
  std::size_t active = 0;
  std::size_t failed_index = SIZE_MAX;
  std::exception_ptr error;
  std::mutex error_mutex;
};

ThreadPool::ThreadPool(unsigned width) : width_(std::max(1u, width)) {
  for (unsigned i = 1; i < width_; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

void ThreadPool::drain(Batch& batch) {
  for (;;) {
    const std::size_t i = batch.next.fetch_add(1);
    if (i >= batch.count) break;
    try {
      (*batch.body)(i);
    } catch (...) {
      std::lock_guard lock(batch.error_mutex);
      if (i < batch.failed_index) {
        batch.failed_index = i;
        batch.error = std::current_exception();
      }
    }
  }
}

void ThreadPool::worker_loop() {
  inside_worker = true;
  std::uint64_t seen = 0;
  for (;;) {
    Batch* batch = nullptr;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stopping_ || (current_ != nullptr && generation_ != seen); });
      if (stopping_) return;
      seen = generation_;
      batch = current_;
      ++batch->active;
    }
    drain(*batch);
    {
      std::lock_guard lock(mutex_);
      --batch->active;
      ++batch->finished;
    }
    done_.notify_all();
  }
}

void ThreadPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (width_ == 1 || inside_worker || count == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::lock_guard submit(submit_mutex_);
  Batch batch;
  batch.count = count;
  batch.body = &body;
  {
    std::lock_guard lock(mutex_);
    current_ = &batch;
    ++generation_;
  }
  wake_.notify_all();
  inside_worker = true;
  drain(batch);
  inside_worker = false;
  {
    std::unique_lock lock(mutex_);
    current_ = nullptr;
    done_.wait(lock, [&] { return batch.active == 0; });
  }
  if (batch.error) std::rethrow_exception(batch.error);
}

}  // namespace charsum
