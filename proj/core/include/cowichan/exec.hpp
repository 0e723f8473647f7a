#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cowichan/error.hpp"

namespace cowichan {

/// The execution strategies under comparison. Four of them mirror distinct
/// parallel-programming paradigms (static blocked loops, recursive fork-join,
/// a CSP-style worker pool fed from a queue, and dynamically scheduled
/// skeleton chunks); SpawnPerItem is the task-per-item anti-pattern kept
/// around so its overhead can be measured.
enum class StrategyKind {
  Sequential,
  BlockedParFor,
  ForkJoin,
  WorkerPool,
  Skeleton,
  SpawnPerItem,
};

std::size_t default_thread_count();

const char* strategy_name(StrategyKind kind);
std::optional<StrategyKind> strategy_from_name(std::string_view name);

/// All six kinds, in declaration order.
const std::vector<StrategyKind>& all_strategies();
/// The four strategies a default campaign sweeps (everything but Sequential
/// and the anti-pattern).
const std::vector<StrategyKind>& campaign_strategies();

struct ExecStrategy {
  StrategyKind kind = StrategyKind::Sequential;
  std::size_t threads = 0;  // 0 -> default_thread_count()
  std::size_t grain = 0;    // 0 -> max(1, n / (8 * threads))

  static ExecStrategy sequential() { return {}; }
  static ExecStrategy of(StrategyKind k, std::size_t threads_ = 0, std::size_t grain_ = 0) {
    return {k, threads_, grain_};
  }

  std::size_t effective_threads() const {
    return threads > 0 ? threads : default_thread_count();
  }
  std::size_t effective_grain(std::size_t n) const {
    if (grain > 0) return grain;
    std::size_t g = n / (8 * effective_threads());
    return g > 0 ? g : 1;
  }
};

/// Half-open index interval [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

/// Invokes body exactly once per index in range, scheduled per the strategy.
/// Returns only after every invocation has completed. The body must confine
/// writes to its own index's output slot. A body failure aborts remaining
/// work and the first exception is rethrown here.
void par_for(IndexRange range, const ExecStrategy& strategy,
             const std::function<void(std::size_t)>& body);

/// Recursive halving of range into parallel tasks until subranges are no
/// larger than grain, then body(leaf). Joins all tasks before returning.
void fork_join(IndexRange range, std::size_t grain,
               const std::function<void(IndexRange)>& body, const ExecStrategy& strategy);

/// One producer enqueues 0..n-1 into a bounded queue; np workers drain it.
/// Returns after all np workers have signalled completion.
void worker_pool(std::size_t n, std::size_t np, const std::function<void(std::size_t)>& body);

/// Divide-and-conquer that creates one task per item. Correct but
/// intentionally overhead-heavy; measured, never used by the kernels.
void spawn_per_item(std::size_t n, const std::function<void(std::size_t)>& body,
                    std::size_t threads = 0);

/// Splits range into ordered contiguous chunks of at most grain indices.
inline std::vector<IndexRange> partition_grain(IndexRange range, std::size_t grain) {
  std::vector<IndexRange> chunks;
  if (range.size() == 0) return chunks;
  if (grain == 0) grain = 1;
  chunks.reserve((range.size() + grain - 1) / grain);
  for (std::size_t b = range.begin; b < range.end; b += grain) {
    chunks.push_back({b, b + grain < range.end ? b + grain : range.end});
  }
  return chunks;
}

/// Fold of map over the range. Chunks are recombined in range order, so the
/// result equals the sequential left fold whenever combine is associative
/// with the given identity.
template <typename T, typename MapFn, typename CombineFn>
T par_reduce(IndexRange range, T identity, MapFn&& map, CombineFn&& combine,
             const ExecStrategy& strategy) {
  if (range.size() == 0) return identity;
  const auto chunks = partition_grain(range, strategy.effective_grain(range.size()));
  std::vector<T> partials(chunks.size(), identity);
  par_for({0, chunks.size()}, strategy, [&](std::size_t ci) {
    T acc = identity;
    for (std::size_t i = chunks[ci].begin; i < chunks[ci].end; ++i) {
      acc = combine(std::move(acc), map(i));
    }
    partials[ci] = std::move(acc);
  });
  T result = identity;
  for (auto& p : partials) result = combine(std::move(result), std::move(p));
  return result;
}

/// Inclusive scan: out[i] = values[0] op ... op values[i]. Three phases:
/// per-chunk scan, sequential prefix over chunk totals, per-chunk fixup.
template <typename T, typename OpFn>
std::vector<T> par_scan(const std::vector<T>& values, OpFn&& op, T identity,
                        const ExecStrategy& strategy) {
  const std::size_t n = values.size();
  std::vector<T> out(n, identity);
  if (n == 0) return out;
  const auto chunks = partition_grain({0, n}, strategy.effective_grain(n));
  std::vector<T> totals(chunks.size(), identity);
  par_for({0, chunks.size()}, strategy, [&](std::size_t ci) {
    T acc = identity;
    for (std::size_t i = chunks[ci].begin; i < chunks[ci].end; ++i) {
      acc = op(std::move(acc), values[i]);
      out[i] = acc;
    }
    totals[ci] = std::move(acc);
  });
  std::vector<T> offsets(chunks.size(), identity);
  for (std::size_t ci = 1; ci < chunks.size(); ++ci) {
    offsets[ci] = op(offsets[ci - 1], totals[ci - 1]);
  }
  par_for({1, chunks.size()}, strategy, [&](std::size_t ci) {
    for (std::size_t i = chunks[ci].begin; i < chunks[ci].end; ++i) {
      out[i] = op(offsets[ci], std::move(out[i]));
    }
  });
  return out;
}

}  // namespace cowichan
