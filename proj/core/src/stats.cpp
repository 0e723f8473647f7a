#include "cowichan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cowichan {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::Loc: return "loc";
    case Metric::CodingTime: return "coding";
    case Metric::ExecTime: return "exec";
    case Metric::InverseSpeedup: return "speedup";
  }
  return "unknown";
}

std::optional<Metric> metric_from_name(std::string_view name) {
  for (Metric m : all_metrics()) {
    if (name == metric_name(m)) return m;
  }
  return std::nullopt;
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> metrics{Metric::Loc, Metric::CodingTime, Metric::ExecTime,
                                           Metric::InverseSpeedup};
  return metrics;
}

double MetricTable::at(const std::string& paradigm, const std::string& problem) const {
  const auto row = values.find(paradigm);
  if (row != values.end()) {
    const auto cell = row->second.find(problem);
    if (cell != row->second.end()) return cell->second;
  }
  throw MissingCellError("metric table (" + std::string(metric_name(metric)) +
                         "): missing cell (" + paradigm + ", " + problem + ")");
}

bool MetricTable::contains(const std::string& paradigm, const std::string& problem) const {
  const auto row = values.find(paradigm);
  return row != values.end() && row->second.count(problem) > 0;
}

std::vector<std::string> MetricTable::paradigms() const {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& [L, _] : values) out.push_back(L);
  return out;
}

std::vector<std::string> MetricTable::problems() const {
  std::vector<std::string> out;
  for (const auto& [L, row] : values) {
    for (const auto& [P, _] : row) {
      if (std::find(out.begin(), out.end(), P) == out.end()) out.push_back(P);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InsufficientDataError("mean: no samples");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw InsufficientDataError("variance: need at least 2 samples");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 3e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

namespace {

double student_t_cdf(double t, double df) {
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

}  // namespace

double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw Error("t quantile: p must lie in (0, 1)");
  if (!(df > 0.0)) throw Error("t quantile: df must be positive");
  if (p == 0.5) return 0.0;
  const bool upper = p > 0.5;
  const double target = upper ? p : 1.0 - p;
  double hi = 1.0;
  while (student_t_cdf(hi, df) < target && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double q = 0.5 * (lo + hi);
  return upper ? q : -q;
}

ConfidenceInterval mean_ci(std::span<const double> samples, double level) {
  if (samples.size() < 2)
    throw InsufficientDataError("mean_ci: need at least 2 samples");
  if (!(level > 0.0 && level < 1.0)) throw Error("mean_ci: level must lie in (0, 1)");
  const double n = static_cast<double>(samples.size());
  const double m = mean(samples);
  const double s = std::sqrt(sample_variance(samples));
  const double t = student_t_quantile(0.5 * (1.0 + level), n - 1.0);
  const double half = t * s / std::sqrt(n);
  return {m, m - half, m + half, level, false};
}

ConfidenceInterval fieller_ci(std::span<const double> num, std::span<const double> den,
                              double level) {
  if (num.size() < 2 || den.size() < 2)
    throw InsufficientDataError("fieller_ci: need at least 2 samples on each side");
  if (!(level > 0.0 && level < 1.0)) throw Error("fieller_ci: level must lie in (0, 1)");
  const double n1 = static_cast<double>(num.size());
  const double n2 = static_cast<double>(den.size());
  const double xbar = mean(num);
  const double ybar = mean(den);
  const double pooled =
      ((n1 - 1.0) * sample_variance(num) + (n2 - 1.0) * sample_variance(den)) / (n1 + n2 - 2.0);
  const double v11 = pooled / n1;  // Var(xbar)
  const double v22 = pooled / n2;  // Var(ybar)
  const double t = student_t_quantile(0.5 * (1.0 + level), n1 + n2 - 2.0);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (ybar == 0.0) return {xbar == 0.0 ? 0.0 : kInf, -kInf, kInf, level, true};
  const double ratio = xbar / ybar;
  const double g = t * t * v22 / (ybar * ybar);
  if (g >= 1.0) return {ratio, -kInf, kInf, level, true};
  // Roots of (xbar - r*ybar)^2 = t^2 (v11 + r^2 v22) in r.
  const double a = ybar * ybar - t * t * v22;
  const double disc = t * t * (v11 * a + xbar * xbar * v22);
  const double root = std::sqrt(disc);
  return {ratio, (xbar * ybar - root) / a, (xbar * ybar + root) / a, level, false};
}

const char* strength_name(Strength s) {
  switch (s) {
    case Strength::Significant: return "significant";
    case Strength::Tends: return "tends";
    case Strength::None: return "none";
  }
  return "unknown";
}

PairwiseResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    const std::string& a_label, const std::string& b_label) {
  if (pairs.empty()) throw InsufficientDataError("wilcoxon: need at least 1 pair");
  PairwiseResult result;
  result.a = a_label;
  result.b = b_label;

  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    const double d = y - x;
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) {
    result.p_value = 1.0;
    return result;
  }

  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::fabs(diffs[i]) < std::fabs(diffs[j]);
  });

  // Doubled ranks stay integral under average-rank tie handling.
  std::vector<long long> rank2(n, 0);
  std::vector<std::size_t> tie_sizes;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && std::fabs(diffs[order[j]]) == std::fabs(diffs[order[i]])) ++j;
    const long long avg2 = static_cast<long long>(i + j + 1);  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) rank2[order[k]] = avg2;
    tie_sizes.push_back(j - i);
    i = j;
  }

  long long w2_plus = 0;
  long long w2_minus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (diffs[i] > 0.0) {
      w2_plus += rank2[i];
    } else {
      w2_minus += rank2[i];
    }
  }
  const long long total2 = w2_plus + w2_minus;  // n(n+1)
  const long long w2_min = std::min(w2_plus, w2_minus);

  if (n <= 12) {
    // Full enumeration of the 2^n sign assignments; exact rational k / 2^n.
    std::uint64_t low = 0;
    std::uint64_t high = 0;
    const std::uint64_t patterns = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      long long w2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::uint64_t{1} << i)) w2 += rank2[i];
      }
      if (w2 <= w2_min) ++low;
      if (w2 >= total2 - w2_min) ++high;
    }
    result.p_value =
        std::min(1.0, static_cast<double>(low + high) / static_cast<double>(patterns));
  } else {
    // Normal approximation with tie correction and continuity correction.
    const double dn = static_cast<double>(n);
    const double mu = dn * (dn + 1.0) / 4.0;
    double tie_term = 0.0;
    for (std::size_t t : tie_sizes) {
      const double dt = static_cast<double>(t);
      tie_term += dt * dt * dt - dt;
    }
    const double sigma2 = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
    if (sigma2 <= 0.0) {
      result.p_value = 1.0;
    } else {
      const double w_plus = static_cast<double>(w2_plus) / 2.0;
      double z = (std::fabs(w_plus - mu) - 0.5) / std::sqrt(sigma2);
      if (z < 0.0) z = 0.0;
      result.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
    }
  }

  if (w2_plus > w2_minus) {
    result.better = a_label;  // b's values ranked larger; smaller metric is better
  } else if (w2_minus > w2_plus) {
    result.better = b_label;
  }
  if (result.p_value < 0.05) {
    result.strength = Strength::Significant;
  } else if (result.p_value < 0.1) {
    result.strength = Strength::Tends;
  }
  return result;
}

std::map<std::string, double> rating(const MetricTable& table) {
  std::map<std::string, double> out;
  const auto paradigms = table.paradigms();
  const auto problems = table.problems();
  if (paradigms.empty() || problems.empty()) return out;
  std::map<std::string, double> best;
  for (const auto& P : problems) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& L : paradigms) {
      const double v = table.at(L, P);
      if (!(v > 0.0))
        throw Error("rating: cell (" + L + ", " + P + ") must be positive");
      m = std::min(m, v);
    }
    best[P] = m;
  }
  for (const auto& L : paradigms) {
    double sum = 0.0;
    for (const auto& P : problems) sum += table.at(L, P) / best[P];
    out[L] = sum / static_cast<double>(problems.size());
  }
  return out;
}

MetricTable normalize(const MetricTable& table) {
  MetricTable out;
  out.metric = table.metric;
  const auto problems = table.problems();
  for (const auto& P : problems) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& L : table.paradigms()) {
      const double v = table.at(L, P);
      if (!(v > 0.0)) throw Error("normalize: cell (" + L + ", " + P + ") must be positive");
      m = std::min(m, v);
    }
    for (const auto& L : table.paradigms()) out.set(L, P, table.at(L, P) / m);
  }
  return out;
}

MetricTable invert_for_speedup(const MetricTable& table) {
  MetricTable out;
  out.metric = Metric::InverseSpeedup;
  for (const auto& [L, row] : table.values) {
    for (const auto& [P, v] : row) {
      if (!(v > 0.0))
        throw Error("invert_for_speedup: cell (" + L + ", " + P + ") must be positive");
      out.set(L, P, 1.0 / v);
    }
  }
  return out;
}

const char* baseline_name(BaselineKind k) {
  return k == BaselineKind::Sequential ? "sequential" : "parallel-on-1-thread";
}

SpeedupCurve speedup_curve(const std::string& paradigm, const std::string& problem,
                           const std::vector<double>* seq_samples,
                           const std::map<std::size_t, std::vector<double>>& par_by_threads,
                           double level) {
  const auto one = par_by_threads.find(1);
  if (one == par_by_threads.end() || one->second.empty())
    throw InsufficientDataError("speedup_curve: parallel samples at 1 thread are required");
  SpeedupCurve curve;
  curve.paradigm = paradigm;
  curve.problem = problem;

  const double par1_mean = mean(one->second);
  const std::vector<double>* baseline = &one->second;
  double t_s = par1_mean;
  curve.baseline = BaselineKind::ParallelOn1Thread;
  if (seq_samples && !seq_samples->empty()) {
    const double seq_mean = mean(*seq_samples);
    if (seq_mean <= par1_mean) {  // ties resolve to the sequential version
      baseline = seq_samples;
      t_s = seq_mean;
      curve.baseline = BaselineKind::Sequential;
    }
  }
  for (const auto& [threads, samples] : par_by_threads) {
    if (samples.empty())
      throw InsufficientDataError("speedup_curve: no samples at " + std::to_string(threads) +
                                  " threads");
    SpeedupPoint point;
    point.value = t_s / mean(samples);
    if (baseline->size() >= 2 && samples.size() >= 2) {
      point.ci = fieller_ci(*baseline, samples, level);
    }
    curve.points[threads] = point;
  }
  return curve;
}

}  // namespace cowichan
