#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <doctest.h>

#include <atomic>
#include <mutex>
#include <numeric>
#include <string>

#include "cowichan/exec.hpp"

using namespace cowichan;

namespace {

std::vector<ExecStrategy> strategies_under_test() {
  std::vector<ExecStrategy> out;
  for (StrategyKind kind : all_strategies()) {
    for (std::size_t threads : {1, 2, 4, 8}) {
      out.push_back(ExecStrategy::of(kind, threads));
      if (kind == StrategyKind::Sequential) break;  // thread count is moot
    }
  }
  return out;
}

}  // namespace

TEST_CASE("par_for: empty range makes no invocations") {
  for (const auto& s : strategies_under_test()) {
    std::atomic<int> calls{0};
    par_for({0, 0}, s, [&](std::size_t) { calls.fetch_add(1); });
    CHECK(calls.load() == 0);
  }
}

TEST_CASE("par_for: every index exactly once, any strategy") {
  for (const auto& s : strategies_under_test()) {
    for (std::size_t n : {1, 7, 64, 1001}) {
      std::vector<std::atomic<int>> tally(n);
      par_for({0, n}, s, [&](std::size_t i) { tally[i].fetch_add(1); });
      for (std::size_t i = 0; i < n; ++i) {
        CAPTURE(strategy_name(s.kind));
        CAPTURE(s.threads);
        CAPTURE(i);
        REQUIRE(tally[i].load() == 1);
      }
    }
  }
}

TEST_CASE("par_for: offset ranges visit the right indices") {
  for (const auto& s : strategies_under_test()) {
    std::vector<std::atomic<int>> tally(30);
    par_for({10, 30}, s, [&](std::size_t i) { tally[i].fetch_add(1); });
    for (std::size_t i = 0; i < 30; ++i) {
      REQUIRE(tally[i].load() == (i >= 10 ? 1 : 0));
    }
  }
}

TEST_CASE("par_for: sequential strategy visits ascending") {
  std::vector<std::size_t> seen;
  par_for({0, 100}, ExecStrategy::sequential(), [&](std::size_t i) { seen.push_back(i); });
  std::vector<std::size_t> expect(100);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(seen == expect);
}

TEST_CASE("par_for: barrier semantics") {
  // Every invocation must have finished by the time par_for returns.
  for (const auto& s : strategies_under_test()) {
    std::atomic<std::size_t> done{0};
    const std::size_t n = 500;
    par_for({0, n}, s, [&](std::size_t) { done.fetch_add(1, std::memory_order_release); });
    CHECK(done.load(std::memory_order_acquire) == n);
  }
}

TEST_CASE("par_for: equivalent outputs for a pure body") {
  std::vector<std::uint64_t> expect(777);
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = i * i + 13;
  for (const auto& s : strategies_under_test()) {
    std::vector<std::uint64_t> out(expect.size(), 0);
    par_for({0, out.size()}, s, [&](std::size_t i) { out[i] = i * i + 13; });
    CHECK(out == expect);
  }
}

TEST_CASE("par_for: a body failure aborts work and surfaces the first error") {
  for (const auto& s : strategies_under_test()) {
    std::atomic<std::size_t> calls{0};
    CHECK_THROWS_WITH_AS(
        par_for({0, 100000}, s,
                [&](std::size_t i) {
                  calls.fetch_add(1);
                  if (i == 0) throw std::runtime_error("boom");
                }),
        "boom", std::runtime_error);
    CHECK(calls.load() <= 100000);
  }
  // Sequential aborts immediately after the throwing index.
  std::size_t calls = 0;
  CHECK_THROWS(par_for({0, 1000}, ExecStrategy::sequential(), [&](std::size_t) {
    ++calls;
    throw std::runtime_error("stop");
  }));
  CHECK(calls == 1);
}

TEST_CASE("par_reduce: empty range yields identity") {
  for (const auto& s : strategies_under_test()) {
    const int r = par_reduce(
        {5, 5}, 42, [](std::size_t) { return 1; }, [](int a, int b) { return a + b; }, s);
    CHECK(r == 42);
  }
}

TEST_CASE("par_reduce: sum of 0..99 is 4950 under every strategy") {
  for (const auto& s : strategies_under_test()) {
    const long r = par_reduce(
        {0, 100}, 0L, [](std::size_t i) { return static_cast<long>(i); },
        [](long a, long b) { return a + b; }, s);
    CHECK(r == 4950);
  }
}

TEST_CASE("par_reduce: histogram equals the sequential histogram") {
  std::vector<std::uint32_t> values(997);
  std::uint32_t state = 7;
  for (auto& v : values) {
    state = 1664525u * state + 1013904223u;
    v = state % 16;
  }
  using Hist = std::array<std::size_t, 16>;
  Hist expect{};
  for (auto v : values) expect[v] += 1;

  for (const auto& s : strategies_under_test()) {
    const Hist got = par_reduce(
        {0, values.size()}, Hist{},
        [&](std::size_t i) {
          Hist h{};
          h[values[i]] += 1;
          return h;
        },
        [](Hist a, const Hist& b) {
          for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
          return a;
        },
        s);
    CHECK(got == expect);
  }
}

TEST_CASE("par_scan: worked example and empty input") {
  const std::vector<int> ones{1, 1, 1, 1};
  for (const auto& s : strategies_under_test()) {
    CHECK(par_scan(ones, [](int a, int b) { return a + b; }, 0, s) ==
          std::vector<int>{1, 2, 3, 4});
    CHECK(par_scan(std::vector<int>{}, [](int a, int b) { return a + b; }, 0, s).empty());
  }
}

TEST_CASE("par_scan: matches the sequential running sum") {
  std::vector<long> values(1234);
  std::uint32_t state = 99;
  for (auto& v : values) {
    state = 1664525u * state + 1013904223u;
    v = static_cast<long>(state % 1000) - 500;
  }
  std::vector<long> expect(values.size());
  long acc = 0;
  for (std::size_t i = 0; i < values.size(); ++i) expect[i] = acc += values[i];
  for (const auto& s : strategies_under_test()) {
    CHECK(par_scan(values, [](long a, long b) { return a + b; }, 0L, s) == expect);
  }
}

TEST_CASE("scan and reduce are chunking-independent for associative ops") {
  // Concatenation is associative but not commutative, so any chunk
  // misordering would show up immediately.
  std::vector<std::string> letters;
  for (char c = 'a'; c <= 'z'; ++c) letters.emplace_back(1, c);
  const std::string expect = "abcdefghijklmnopqrstuvwxyz";
  auto concat = [](std::string a, const std::string& b) { return a + b; };
  for (StrategyKind kind : all_strategies()) {
    for (std::size_t grain : {1, 2, 3, 5, 26, 100}) {
      ExecStrategy s = ExecStrategy::of(kind, 4, grain);
      const std::string folded = par_reduce(
          {0, letters.size()}, std::string{}, [&](std::size_t i) { return letters[i]; }, concat,
          s);
      CHECK(folded == expect);
      const auto scanned = par_scan(letters, concat, std::string{}, s);
      REQUIRE(scanned.size() == letters.size());
      CHECK(scanned.back() == expect);
      CHECK(scanned[2] == "abc");
    }
  }
}

TEST_CASE("fork_join: grain covering the whole range means one call") {
  std::mutex mu;
  std::vector<IndexRange> leaves;
  fork_join({3, 11}, 8, [&](IndexRange r) {
    std::lock_guard lock(mu);
    leaves.push_back(r);
  }, ExecStrategy::of(StrategyKind::ForkJoin, 4));
  REQUIRE(leaves.size() == 1);
  CHECK(leaves[0].begin == 3);
  CHECK(leaves[0].end == 11);
}

TEST_CASE("fork_join: grain 1 leaves partition the range") {
  std::mutex mu;
  std::vector<IndexRange> leaves;
  fork_join({0, 8}, 1, [&](IndexRange r) {
    std::lock_guard lock(mu);
    leaves.push_back(r);
  }, ExecStrategy::of(StrategyKind::ForkJoin, 4));
  CHECK(leaves.size() == 8);
  std::sort(leaves.begin(), leaves.end(),
            [](IndexRange a, IndexRange b) { return a.begin < b.begin; });
  std::size_t next = 0;
  for (const auto& r : leaves) {
    CHECK(r.begin == next);
    CHECK(r.size() == 1);
    next = r.end;
  }
  CHECK(next == 8);
}

TEST_CASE("fork_join: partitions cover arbitrary ranges at any grain") {
  for (std::size_t n : {1, 5, 64, 129}) {
    for (std::size_t grain : {1, 2, 7, 200}) {
      std::vector<std::atomic<int>> tally(n);
      fork_join({0, n}, grain, [&](IndexRange r) {
        for (std::size_t i = r.begin; i < r.end; ++i) tally[i].fetch_add(1);
      }, ExecStrategy::of(StrategyKind::ForkJoin, 4));
      for (std::size_t i = 0; i < n; ++i) REQUIRE(tally[i].load() == 1);
    }
  }
}

TEST_CASE("worker_pool: empty input still joins all workers") {
  std::atomic<int> calls{0};
  worker_pool(0, 4, [&](std::size_t) { calls.fetch_add(1); });
  CHECK(calls.load() == 0);
}

TEST_CASE("worker_pool: each index processed exactly once") {
  const std::size_t n = 1000;
  std::vector<std::atomic<int>> tally(n);
  worker_pool(n, 4, [&](std::size_t i) { tally[i].fetch_add(1); });
  for (std::size_t i = 0; i < n; ++i) REQUIRE(tally[i].load() == 1);
}

TEST_CASE("worker_pool: one worker behaves like the sequential loop") {
  std::vector<std::size_t> seen;
  worker_pool(50, 1, [&](std::size_t i) { seen.push_back(i); });
  std::vector<std::size_t> expect(50);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(seen == expect);
}

TEST_CASE("spawn_per_item: matches worker_pool output") {
  const std::size_t n = 300;
  std::vector<int> a(n, 0), b(n, 0);
  worker_pool(n, 4, [&](std::size_t i) { a[i] = static_cast<int>(i) * 3; });
  spawn_per_item(n, [&](std::size_t i) { b[i] = static_cast<int>(i) * 3; }, 4);
  CHECK(a == b);
}

TEST_CASE("spawn_per_item: a single item runs once") {
  std::atomic<int> calls{0};
  spawn_per_item(1, [&](std::size_t i) {
    CHECK(i == 0);
    calls.fetch_add(1);
  }, 2);
  CHECK(calls.load() == 1);
}

TEST_CASE("grain default follows n / (8 * threads)") {
  ExecStrategy s = ExecStrategy::of(StrategyKind::BlockedParFor, 4);
  CHECK(s.effective_grain(6400) == 200);
  CHECK(s.effective_grain(7) == 1);   // never below 1
  s.grain = 64;
  CHECK(s.effective_grain(6400) == 64);
}
