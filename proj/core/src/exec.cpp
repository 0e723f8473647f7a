#include "cowichan/exec.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

namespace cowichan {

namespace {

// Shared first-failure state. The first exception wins; later loop
// iterations observe aborted() and stop picking up work.
class FailureLatch {
 public:
  bool aborted() const noexcept { return failed_.load(std::memory_order_relaxed); }

  void capture() noexcept {
    std::lock_guard lock(mutex_);
    if (!first_) first_ = std::current_exception();
    failed_.store(true, std::memory_order_relaxed);
  }

  void rethrow_if_failed() {
    std::lock_guard lock(mutex_);
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::atomic<bool> failed_{false};
  std::mutex mutex_;
  std::exception_ptr first_;
};

// Single-producer bounded index queue, the distribute half of the
// distribute-work-synchronize pattern. Both sides spin-yield briefly at the
// full/empty edges before a condvar sleep; waiter counts keep the fast path
// free of notify calls.
class BoundedIndexQueue {
 public:
  explicit BoundedIndexQueue(std::size_t capacity)
      : buffer_(capacity > 0 ? capacity : 1) {}

  void push(std::size_t value) {
    std::unique_lock lock(mutex_);
    for (int spin = 0; count_ == buffer_.size(); ++spin) {
      if (spin < kSpinLimit) {
        lock.unlock();
        std::this_thread::yield();
        lock.lock();
      } else {
        ++waiting_full_;
        not_full_.wait(lock, [&] { return count_ < buffer_.size(); });
        --waiting_full_;
      }
    }
    buffer_[(head_ + count_) % buffer_.size()] = value;
    ++count_;
    const bool wake = waiting_empty_ > 0;
    lock.unlock();
    if (wake) not_empty_.notify_one();
  }

  std::optional<std::size_t> pop() {
    std::unique_lock lock(mutex_);
    for (int spin = 0; count_ == 0 && !closed_; ++spin) {
      if (spin < kSpinLimit) {
        lock.unlock();
        std::this_thread::yield();
        lock.lock();
      } else {
        ++waiting_empty_;
        not_empty_.wait(lock, [&] { return count_ > 0 || closed_; });
        --waiting_empty_;
      }
    }
    if (count_ == 0) return std::nullopt;
    std::size_t value = buffer_[head_];
    head_ = (head_ + 1) % buffer_.size();
    --count_;
    const bool wake = waiting_full_ > 0;
    lock.unlock();
    if (wake) not_full_.notify_one();
    return value;
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    not_empty_.notify_all();
  }

 private:
  static constexpr int kSpinLimit = 64;

  std::vector<std::size_t> buffer_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  std::size_t waiting_full_ = 0;
  std::size_t waiting_empty_ = 0;
  bool closed_ = false;
  std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
};

// Fixed set of workers draining a task queue. Tasks may submit subtasks;
// no task ever blocks on another, so wait_all() waits on a counter instead
// of per-task joins and a full queue cannot deadlock the pool.
class TaskPool {
 public:
  TaskPool(std::size_t threads, FailureLatch& latch) : latch_(latch) {
    if (threads == 0) threads = 1;
    workers_.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) {
      workers_.emplace_back([this] { run(); });
    }
  }

  ~TaskPool() {
    {
      std::lock_guard lock(mutex_);
      shutdown_ = true;
    }
    has_work_.notify_all();
    for (auto& w : workers_) w.join();
  }

  void submit(std::function<void()> task) {
    {
      std::lock_guard lock(mutex_);
      queue_.push_back(std::move(task));
      ++outstanding_;
    }
    has_work_.notify_one();
  }

  // Returns once every task submitted so far (including subtasks submitted
  // by running tasks) has finished.
  void wait_all() {
    std::unique_lock lock(mutex_);
    all_done_.wait(lock, [&] { return outstanding_ == 0; });
  }

 private:
  void run() {
    std::unique_lock lock(mutex_);
    for (;;) {
      has_work_.wait(lock, [&] { return !queue_.empty() || shutdown_; });
      if (queue_.empty()) return;
      auto task = std::move(queue_.front());
      queue_.pop_front();
      lock.unlock();
      if (!latch_.aborted()) {
        try {
          task();
        } catch (...) {
          latch_.capture();
        }
      }
      lock.lock();
      if (--outstanding_ == 0) all_done_.notify_all();
    }
  }

  FailureLatch& latch_;
  std::deque<std::function<void()>> queue_;
  std::size_t outstanding_ = 0;
  bool shutdown_ = false;
  std::mutex mutex_;
  std::condition_variable has_work_;
  std::condition_variable all_done_;
  std::vector<std::thread> workers_;
};

// Near-equal contiguous blocks, one thread each; block count is capped so
// no block falls below the grain.
void run_blocked(IndexRange range, std::size_t threads, std::size_t grain,
                 const std::function<void(IndexRange)>& chunk) {
  const std::size_t len = range.size();
  std::size_t max_blocks = grain > 0 ? (len + grain - 1) / grain : len;
  std::size_t nblocks = std::min(threads, max_blocks);
  if (nblocks <= 1) {
    chunk(range);
    return;
  }
  FailureLatch latch;
  const std::size_t base = len / nblocks;
  const std::size_t rem = len % nblocks;
  std::vector<std::thread> workers;
  workers.reserve(nblocks);
  std::size_t start = range.begin;
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t size = base + (b < rem ? 1 : 0);
    const IndexRange block{start, start + size};
    start += size;
    workers.emplace_back([&, block] {
      if (latch.aborted()) return;
      try {
        chunk(block);
      } catch (...) {
        latch.capture();
      }
    });
  }
  for (auto& w : workers) w.join();
  latch.rethrow_if_failed();
}

// Workers grab grain-sized chunks from a shared cursor until the range is
// exhausted (dynamic load balancing, skeleton style).
void run_dynamic(IndexRange range, std::size_t threads, std::size_t grain,
                 const std::function<void(IndexRange)>& chunk) {
  if (grain == 0) grain = 1;
  FailureLatch latch;
  std::atomic<std::size_t> cursor{range.begin};
  auto worker = [&] {
    for (;;) {
      if (latch.aborted()) return;
      const std::size_t b = cursor.fetch_add(grain, std::memory_order_relaxed);
      if (b >= range.end) return;
      const std::size_t e = b + grain < range.end ? b + grain : range.end;
      try {
        chunk({b, e});
      } catch (...) {
        latch.capture();
      }
    }
  };
  std::size_t nworkers = std::min(threads, (range.size() + grain - 1) / grain);
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(nworkers);
    for (std::size_t i = 0; i < nworkers; ++i) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  latch.rethrow_if_failed();
}

void fork_join_impl(IndexRange range, std::size_t grain, std::size_t threads,
                    const std::function<void(IndexRange)>& leaf) {
  if (range.size() == 0) return;
  if (grain == 0) grain = 1;
  if (range.size() <= grain) {
    leaf(range);
    return;
  }
  FailureLatch latch;
  TaskPool pool(threads, latch);
  // Spawn the left half as a task, keep halving the right half in place.
  std::function<void(IndexRange)> split = [&](IndexRange r) {
    while (r.size() > grain) {
      if (latch.aborted()) return;
      const std::size_t mid = r.begin + r.size() / 2;
      pool.submit([&split, left = IndexRange{r.begin, mid}] { split(left); });
      r.begin = mid;
    }
    leaf(r);
  };
  pool.submit([&split, range] { split(range); });
  pool.wait_all();
  latch.rethrow_if_failed();
}

void spawn_per_item_impl(IndexRange range, std::size_t threads,
                         const std::function<void(std::size_t)>& body) {
  if (range.size() == 0) return;
  FailureLatch latch;
  TaskPool pool(threads, latch);
  std::function<void(IndexRange)> split = [&](IndexRange r) {
    while (r.size() > 1) {
      if (latch.aborted()) return;
      const std::size_t mid = r.begin + r.size() / 2;
      pool.submit([&split, left = IndexRange{r.begin, mid}] { split(left); });
      r.begin = mid;
    }
    body(r.begin);
  };
  pool.submit([&split, range] { split(range); });
  pool.wait_all();
  latch.rethrow_if_failed();
}

void worker_pool_impl(std::size_t n, std::size_t np,
                      const std::function<void(std::size_t)>& body) {
  if (np == 0) np = 1;
  FailureLatch latch;
  // Capacity well above 2*NP: with a tiny buffer, every producer/consumer
  // rendezvous costs a scheduler round trip, which on machines with few
  // spare cores makes the pool slower than task-per-item spawning.
  BoundedIndexQueue queue(std::max<std::size_t>(2 * np, 1024));
  std::vector<std::thread> workers;
  workers.reserve(np);
  for (std::size_t w = 0; w < np; ++w) {
    workers.emplace_back([&] {
      while (auto idx = queue.pop()) {
        if (latch.aborted()) continue;  // keep draining so the producer unblocks
        try {
          body(*idx);
        } catch (...) {
          latch.capture();
        }
      }
    });
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (latch.aborted()) break;
    queue.push(i);
  }
  queue.close();
  for (auto& w : workers) w.join();
  latch.rethrow_if_failed();
}

}  // namespace

std::size_t default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

const char* strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Sequential: return "sequential";
    case StrategyKind::BlockedParFor: return "blocked-for";
    case StrategyKind::ForkJoin: return "fork-join";
    case StrategyKind::WorkerPool: return "worker-pool";
    case StrategyKind::Skeleton: return "skeleton";
    case StrategyKind::SpawnPerItem: return "spawn-per-item";
  }
  return "unknown";
}

std::optional<StrategyKind> strategy_from_name(std::string_view name) {
  for (StrategyKind k : all_strategies()) {
    if (name == strategy_name(k)) return k;
  }
  return std::nullopt;
}

const std::vector<StrategyKind>& all_strategies() {
  static const std::vector<StrategyKind> kinds{
      StrategyKind::Sequential,   StrategyKind::BlockedParFor, StrategyKind::ForkJoin,
      StrategyKind::WorkerPool,   StrategyKind::Skeleton,      StrategyKind::SpawnPerItem,
  };
  return kinds;
}

const std::vector<StrategyKind>& campaign_strategies() {
  static const std::vector<StrategyKind> kinds{
      StrategyKind::BlockedParFor,
      StrategyKind::ForkJoin,
      StrategyKind::WorkerPool,
      StrategyKind::Skeleton,
  };
  return kinds;
}

void par_for(IndexRange range, const ExecStrategy& strategy,
             const std::function<void(std::size_t)>& body) {
  if (range.begin > range.end) throw ShapeError("par_for: range begin exceeds end");
  const std::size_t len = range.size();
  if (len == 0) return;
  const std::size_t threads = strategy.effective_threads();
  const std::size_t grain = strategy.effective_grain(len);
  const auto leaf = [&body](IndexRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) body(i);
  };
  switch (strategy.kind) {
    case StrategyKind::Sequential:
      leaf(range);
      return;
    case StrategyKind::BlockedParFor:
      run_blocked(range, threads, grain, leaf);
      return;
    case StrategyKind::ForkJoin:
      fork_join_impl(range, grain, threads, leaf);
      return;
    case StrategyKind::WorkerPool:
      worker_pool_impl(len, threads,
                       [&body, base = range.begin](std::size_t i) { body(base + i); });
      return;
    case StrategyKind::Skeleton:
      run_dynamic(range, threads, grain, leaf);
      return;
    case StrategyKind::SpawnPerItem:
      spawn_per_item_impl(range, threads, body);
      return;
  }
}

void fork_join(IndexRange range, std::size_t grain,
               const std::function<void(IndexRange)>& body, const ExecStrategy& strategy) {
  if (range.begin > range.end) throw ShapeError("fork_join: range begin exceeds end");
  fork_join_impl(range, grain, strategy.effective_threads(), body);
}

void worker_pool(std::size_t n, std::size_t np, const std::function<void(std::size_t)>& body) {
  worker_pool_impl(n, np, body);
}

void spawn_per_item(std::size_t n, const std::function<void(std::size_t)>& body,
                    std::size_t threads) {
  spawn_per_item_impl({0, n}, threads > 0 ? threads : default_thread_count(), body);
}

}  // namespace cowichan
