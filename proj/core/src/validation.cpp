#include "cowichan/validation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cowichan/io.hpp"

namespace cowichan {

namespace {

// Draw-sequence generator, independent of the kernels' row streams.
class DrawRng {
 public:
  explicit DrawRng(std::uint32_t seed) : state_(seed) {}
  std::uint32_t next() {
    state_ = 1664525u * state_ + 1013904223u;
    return state_;
  }
  std::size_t below(std::size_t n) { return n > 0 ? next() % n : 0; }
  std::size_t between(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + below(hi - lo + 1);
  }

 private:
  std::uint32_t state_;
};

std::string first_diff(const IntMatrix& expect, const IntMatrix& got) {
  if (expect.nrows != got.nrows || expect.ncols != got.ncols) return "matrix shape differs";
  for (std::size_t i = 0; i < expect.data.size(); ++i) {
    if (expect.data[i] != got.data[i]) {
      std::ostringstream ss;
      ss << "cell (" << i / expect.ncols << ", " << i % expect.ncols << "): expected "
         << expect.data[i] << ", got " << got.data[i];
      return ss.str();
    }
  }
  return {};
}

std::string first_diff(const Mask& expect, const Mask& got) {
  if (expect.nrows != got.nrows || expect.ncols != got.ncols) return "mask shape differs";
  for (std::size_t i = 0; i < expect.data.size(); ++i) {
    if (expect.data[i] != got.data[i]) {
      std::ostringstream ss;
      ss << "cell (" << i / expect.ncols << ", " << i % expect.ncols << "): expected "
         << int(expect.data[i]) << ", got " << int(got.data[i]);
      return ss.str();
    }
  }
  return {};
}

std::string first_diff(const PointList& expect, const PointList& got) {
  if (expect.size() != got.size()) return "point count differs";
  for (std::size_t i = 0; i < expect.size(); ++i) {
    if (!(expect.points[i] == got.points[i])) {
      std::ostringstream ss;
      ss << "point " << i << ": expected (" << expect.points[i].row << ", "
         << expect.points[i].col << "), got (" << got.points[i].row << ", "
         << got.points[i].col << ")";
      return ss.str();
    }
  }
  return {};
}

std::string first_diff(const RealMatrix& expect, const RealMatrix& got) {
  if (expect.n != got.n) return "matrix shape differs";
  for (std::size_t i = 0; i < expect.data.size(); ++i) {
    if (expect.data[i] != got.data[i]) {
      std::ostringstream ss;
      ss << "cell (" << i / expect.n << ", " << i % expect.n << "): expected "
         << format_real(expect.data[i]) << ", got " << format_real(got.data[i]);
      return ss.str();
    }
  }
  return {};
}

std::string first_diff(const RealVector& expect, const RealVector& got) {
  if (expect.size() != got.size()) return "vector length differs";
  for (std::size_t i = 0; i < expect.size(); ++i) {
    if (expect[i] != got[i]) {
      std::ostringstream ss;
      ss << "element " << i << ": expected " << format_real(expect[i]) << ", got "
         << format_real(got[i]);
      return ss.str();
    }
  }
  return {};
}

std::string diff_outputs(const KernelOutput& expect, const KernelOutput& got) {
  if (expect.matrix && got.matrix) {
    if (auto d = first_diff(*expect.matrix, *got.matrix); !d.empty()) return d;
  }
  if (expect.mask && got.mask) {
    if (auto d = first_diff(*expect.mask, *got.mask); !d.empty()) return d;
  }
  if (expect.points && got.points) {
    if (auto d = first_diff(*expect.points, *got.points); !d.empty()) return d;
  }
  if (expect.real_matrix && got.real_matrix) {
    if (auto d = first_diff(*expect.real_matrix, *got.real_matrix); !d.empty())
      return "distance " + d;
  }
  if (expect.real_vector && got.real_vector) {
    if (auto d = first_diff(*expect.real_vector, *got.real_vector); !d.empty()) return d;
  }
  if (expect.matrix.has_value() != got.matrix.has_value() ||
      expect.mask.has_value() != got.mask.has_value() ||
      expect.points.has_value() != got.points.has_value() ||
      expect.real_matrix.has_value() != got.real_matrix.has_value() ||
      expect.real_vector.has_value() != got.real_vector.has_value()) {
    return "output kinds differ";
  }
  return {};
}

}  // namespace

std::string describe(const ValidationFailure& f) {
  std::ostringstream ss;
  ss << problem_name(f.problem) << " under " << strategy_name(f.strategy) << " with "
     << f.threads << " thread(s), trial " << f.trial << ": " << f.detail;
  return ss.str();
}

ValidationResult validate_determinism(const ValidationOptions& options) {
  ValidationResult result;
  std::vector<StrategyKind> strategies = options.strategies;
  if (strategies.empty()) {
    for (StrategyKind k : all_strategies()) {
      if (k != StrategyKind::Sequential) strategies.push_back(k);
    }
  }
  DrawRng rng(options.seed);
  const ExecStrategy seq = ExecStrategy::sequential();

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    KernelParams params;
    params.nrows = rng.between(1, options.max_size);
    params.ncols = rng.between(1, options.max_size);
    params.seed = rng.next();
    params.percent = static_cast<int>(rng.between(0, 100));

    // Sequential oracle for the pipeline.
    const IntMatrix m = randmat(params.nrows, params.ncols, params.seed, seq);
    const Mask mask = thresh(m, params.percent, seq);
    const std::size_t n_candidates = mask.count_true();
    params.nelts = n_candidates > 0 ? rng.between(1, std::min<std::size_t>(n_candidates, 256)) : 0;

    KernelInputs inputs;
    std::map<Problem, KernelOutput> oracle;
    oracle[Problem::Randmat].matrix = m;
    oracle[Problem::Thresh].mask = mask;
    inputs.matrix = m;
    inputs.mask = mask;
    if (params.nelts > 0) {
      const PointList pts = winnow(m, mask, params.nelts, seq);
      auto [dist, vec] = outer(pts, seq);
      oracle[Problem::Winnow].points = pts;
      oracle[Problem::Outer].real_matrix = dist;
      oracle[Problem::Outer].real_vector = vec;
      oracle[Problem::Product].real_vector = product(dist, vec, seq);
      inputs.points = pts;
      inputs.real_matrix = std::move(dist);
      inputs.real_vector = std::move(vec);
    }

    // chain parameters chosen so the winnow stage always succeeds
    KernelParams chain_params;
    chain_params.nelts = rng.between(4, 128);
    chain_params.seed = rng.next();
    chain_params.percent = static_cast<int>(rng.between(40, 90));
    chain_params.nrows = chain_params.ncols = chain_params.nelts;
    oracle[Problem::Chain].real_vector =
        chain(chain_params.nelts, chain_params.seed, chain_params.percent, seq);

    for (StrategyKind kind : strategies) {
      for (std::size_t threads : options.thread_counts) {
        const ExecStrategy strategy = ExecStrategy::of(kind, threads);
        for (Problem problem : all_problems()) {
          if (!oracle.count(problem)) continue;
          const KernelParams& p = problem == Problem::Chain ? chain_params : params;
          KernelOutput got = run_kernel(problem, inputs, p, strategy);
          if (options.perturb) options.perturb(problem, got);
          ++result.comparisons;
          const std::string diff = diff_outputs(oracle[problem], got);
          if (!diff.empty()) {
            result.failures.push_back({problem, kind, threads, trial, diff});
          }
        }
      }
    }
  }
  return result;
}

}  // namespace cowichan
