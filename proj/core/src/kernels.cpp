#include "cowichan/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace cowichan {

namespace {

constexpr std::uint32_t kLcgA = 1664525u;
constexpr std::uint32_t kLcgC = 1013904223u;
constexpr std::uint32_t kRowStride = 2654435769u;
constexpr std::uint32_t kValueRange = 100u;

inline std::uint32_t lcg_step(std::uint32_t x) { return kLcgA * x + kLcgC; }

}  // namespace

const char* problem_name(Problem p) {
  switch (p) {
    case Problem::Randmat: return "randmat";
    case Problem::Thresh: return "thresh";
    case Problem::Winnow: return "winnow";
    case Problem::Outer: return "outer";
    case Problem::Product: return "product";
    case Problem::Chain: return "chain";
  }
  return "unknown";
}

std::optional<Problem> problem_from_name(std::string_view name) {
  for (Problem p : all_problems()) {
    if (name == problem_name(p)) return p;
  }
  return std::nullopt;
}

const std::vector<Problem>& all_problems() {
  static const std::vector<Problem> problems{
      Problem::Randmat, Problem::Thresh,  Problem::Winnow,
      Problem::Outer,   Problem::Product, Problem::Chain,
  };
  return problems;
}

IntMatrix randmat(std::size_t nrows, std::size_t ncols, std::uint32_t seed,
                  const ExecStrategy& strategy) {
  IntMatrix m(nrows, ncols);
  par_for({0, nrows}, strategy, [&](std::size_t r) {
    std::uint32_t state = seed + static_cast<std::uint32_t>(r) * kRowStride;
    std::uint32_t* row = m.data.data() + r * ncols;
    for (std::size_t c = 0; c < ncols; ++c) {
      state = lcg_step(state);
      row[c] = state % kValueRange;
    }
  });
  return m;
}

Mask thresh(const IntMatrix& m, int percent, const ExecStrategy& strategy) {
  if (percent < 0 || percent > 100) throw ShapeError("thresh: percent must lie in [0, 100]");
  Mask mask(m.nrows, m.ncols);
  const std::size_t total = m.data.size();
  const std::size_t target = total * static_cast<std::size_t>(percent) / 100;
  if (target == 0) return mask;  // all-false

  // Chunk-local histograms combined in range order; 100 bins because
  // elements live in [0, 100).
  using Histogram = std::array<std::size_t, kValueRange>;
  const auto chunks = partition_grain({0, total}, strategy.effective_grain(total));
  std::vector<Histogram> partials(chunks.size(), Histogram{});
  par_for({0, chunks.size()}, strategy, [&](std::size_t ci) {
    Histogram local{};
    for (std::size_t i = chunks[ci].begin; i < chunks[ci].end; ++i) {
      const std::uint32_t v = m.data[i];
      if (v >= kValueRange) throw ShapeError("thresh: element out of range [0, 100)");
      local[v] += 1;
    }
    partials[ci] = local;
  });
  Histogram hist{};
  for (const Histogram& p : partials) {
    for (std::size_t v = 0; v < kValueRange; ++v) hist[v] += p[v];
  }

  // Largest t whose upper tail still reaches the target.
  std::uint32_t t = 0;
  std::size_t above = 0;
  for (std::uint32_t v = kValueRange; v-- > 0;) {
    above += hist[v];
    if (above >= target) {
      t = v;
      break;
    }
  }
  par_for({0, total}, strategy, [&](std::size_t i) {
    mask.data[i] = m.data[i] >= t ? 1 : 0;
  });
  return mask;
}

PointList winnow(const IntMatrix& m, const Mask& mask, std::size_t nelts,
                 const ExecStrategy& strategy) {
  if (mask.nrows != m.nrows || mask.ncols != m.ncols)
    throw ShapeError("winnow: mask dimensions do not match the matrix");
  if (nelts < 1) throw ShapeError("winnow: nelts must be >= 1");

  // Per-row candidate counts, then offsets, then a parallel gather into
  // disjoint slots; the sort below is what makes the order deterministic.
  std::vector<std::size_t> row_counts(m.nrows, 0);
  par_for({0, m.nrows}, strategy, [&](std::size_t r) {
    std::size_t count = 0;
    for (std::size_t c = 0; c < m.ncols; ++c) count += mask.data[r * m.ncols + c];
    row_counts[r] = count;
  });
  const std::vector<std::size_t> ends =
      par_scan(row_counts, [](std::size_t a, std::size_t b) { return a + b; },
               std::size_t{0}, strategy);
  const std::size_t n_candidates = m.nrows > 0 ? ends.back() : 0;
  if (n_candidates < nelts)
    throw InsufficientCandidatesError(
        "winnow: " + std::to_string(n_candidates) + " candidates, " +
        std::to_string(nelts) + " requested");

  struct Candidate {
    std::uint32_t value;
    std::size_t row;
    std::size_t col;
  };
  std::vector<Candidate> candidates(n_candidates);
  par_for({0, m.nrows}, strategy, [&](std::size_t r) {
    std::size_t slot = ends[r] - row_counts[r];
    for (std::size_t c = 0; c < m.ncols; ++c) {
      if (mask.data[r * m.ncols + c]) {
        candidates[slot++] = {m.at(r, c), r, c};
      }
    }
  });
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });

  PointList out;
  out.points.resize(nelts);
  par_for({0, nelts}, strategy, [&](std::size_t k) {
    const Candidate& c = candidates[k * n_candidates / nelts];
    out.points[k] = {c.row, c.col};
  });
  return out;
}

std::pair<RealMatrix, RealVector> outer(const PointList& pts, const ExecStrategy& strategy) {
  const std::size_t n = pts.size();
  if (n < 1) throw ShapeError("outer: point list must not be empty");
  RealMatrix m(n);
  RealVector vec(n);
  par_for({0, n}, strategy, [&](std::size_t i) {
    const double ri = static_cast<double>(pts.points[i].row);
    const double ci = static_cast<double>(pts.points[i].col);
    double row_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dr = ri - static_cast<double>(pts.points[j].row);
      const double dc = ci - static_cast<double>(pts.points[j].col);
      const double d = std::sqrt(dr * dr + dc * dc);
      m.at(i, j) = d;
      row_max = std::max(row_max, d);
    }
    m.at(i, i) = static_cast<double>(n) * row_max;
    vec[i] = std::sqrt(ri * ri + ci * ci);
  });
  return {std::move(m), std::move(vec)};
}

RealVector product(const RealMatrix& m, const RealVector& v, const ExecStrategy& strategy) {
  if (m.n != v.size())
    throw ShapeError("product: matrix is " + std::to_string(m.n) + "x" + std::to_string(m.n) +
                     " but vector has length " + std::to_string(v.size()));
  RealVector out(m.n);
  par_for({0, m.n}, strategy, [&](std::size_t i) {
    const double* row = m.data.data() + i * m.n;
    double sum = 0.0;
    for (std::size_t j = 0; j < m.n; ++j) sum += row[j] * v[j];
    out[i] = sum;
  });
  return out;
}

RealVector chain(std::size_t nelts, std::uint32_t seed, int percent,
                 const ExecStrategy& strategy) {
  if (nelts < 1) throw ShapeError("chain: nelts must be >= 1");
  const IntMatrix m = randmat(nelts, nelts, seed, strategy);
  const Mask mask = thresh(m, percent, strategy);
  const PointList pts = winnow(m, mask, nelts, strategy);
  auto [dist, vec] = outer(pts, strategy);
  return product(dist, vec, strategy);
}

}  // namespace cowichan
