#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cowichan/bench.hpp"

namespace cowichan {

struct ValidationOptions {
  std::size_t max_size = 200;   // upper bound on matrix dimensions
  std::size_t trials = 20;      // random parameter draws
  std::uint32_t seed = 0x5eedu; // draw sequence seed
  std::vector<StrategyKind> strategies;  // default: every non-sequential kind
  std::vector<std::size_t> thread_counts{1, 2, 4, 8};
  /// Test-only fault injection, applied to each strategy output before the
  /// comparison; lets the harness confirm mismatch reporting.
  std::function<void(Problem, KernelOutput&)> perturb;
};

struct ValidationFailure {
  Problem problem = Problem::Randmat;
  StrategyKind strategy = StrategyKind::Sequential;
  std::size_t threads = 1;
  std::size_t trial = 0;
  std::string detail;  // first differing cell, expected vs actual
};

struct ValidationResult {
  std::size_t comparisons = 0;
  std::vector<ValidationFailure> failures;
  bool passed() const { return failures.empty(); }
};

/// Runs every kernel under every requested strategy and thread count against
/// the sequential oracle, requiring bit-identical outputs.
ValidationResult validate_determinism(const ValidationOptions& options);

std::string describe(const ValidationFailure& failure);

}  // namespace cowichan
