#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cowichan/error.hpp"

namespace cowichan {

enum class Metric { Loc, CodingTime, ExecTime, InverseSpeedup };

/// Short labels used for CLI flags and file names: loc, coding, exec, speedup.
const char* metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);
const std::vector<Metric>& all_metrics();

/// Scalar m(L, P) per paradigm x problem for one metric; smaller is better
/// (speedups are inverted before they land here).
struct MetricTable {
  Metric metric = Metric::ExecTime;
  std::map<std::string, std::map<std::string, double>> values;  // paradigm -> problem -> value

  void set(const std::string& paradigm, const std::string& problem, double value) {
    values[paradigm][problem] = value;
  }
  double at(const std::string& paradigm, const std::string& problem) const;
  bool contains(const std::string& paradigm, const std::string& problem) const;
  std::vector<std::string> paradigms() const;
  /// Sorted union of problem keys across paradigms.
  std::vector<std::string> problems() const;
};

struct ConfidenceInterval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;
  bool unbounded = false;
};

/// Arithmetic mean with a two-sided Student-t interval,
/// half-width t_{(1+level)/2, n-1} * s / sqrt(n). Needs >= 2 samples.
ConfidenceInterval mean_ci(std::span<const double> samples, double level);

/// Fieller interval for the ratio mean(num)/mean(den) of two independent
/// sample sets, pooled variance, df = n1+n2-2. When the denominator is not
/// significantly nonzero at the level (g >= 1) the interval is unbounded.
ConfidenceInterval fieller_ci(std::span<const double> num, std::span<const double> den,
                              double level);

enum class Strength { Significant, Tends, None };
const char* strength_name(Strength s);

struct PairwiseResult {
  std::string a;
  std::string b;
  double p_value = 1.0;
  std::optional<std::string> better;  // smaller rank-sum burden; smaller metric wins
  Strength strength = Strength::None;
};

/// Two-sided Wilcoxon signed-rank test on paired samples (x_i, y_i) with
/// differences y_i - x_i. Zero differences are dropped; tied magnitudes get
/// average ranks. Exact p by full sign enumeration for n <= 12 remaining
/// pairs, tie-corrected normal approximation beyond. Significant if
/// p < 0.05, tends if 0.05 <= p < 0.1.
PairwiseResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    const std::string& a_label = "a",
                                    const std::string& b_label = "b");

/// Average relative rating: rating(L) = mean over P of
/// m(L,P) / min_{L'} m(L',P). 1.0 means best in every problem.
std::map<std::string, double> rating(const MetricTable& table);

/// Cell / per-problem minimum.
MetricTable normalize(const MetricTable& table);

/// Cell-wise reciprocal, for speedups where larger is better.
MetricTable invert_for_speedup(const MetricTable& table);

enum class BaselineKind { Sequential, ParallelOn1Thread };
const char* baseline_name(BaselineKind k);

struct SpeedupPoint {
  double value = 0.0;
  std::optional<ConfidenceInterval> ci;  // absent when either side has < 2 samples
};

struct SpeedupCurve {
  std::string paradigm;
  std::string problem;
  BaselineKind baseline = BaselineKind::Sequential;
  std::map<std::size_t, SpeedupPoint> points;  // threads -> speedup
};

/// speedup(n) = T_s / mean(T_p(n)) where T_s is the fastest single-thread
/// time: min of mean(sequential) and mean(parallel at 1 thread). Intervals
/// per Fieller. seq_samples may be null when no sequential variant exists.
SpeedupCurve speedup_curve(const std::string& paradigm, const std::string& problem,
                           const std::vector<double>* seq_samples,
                           const std::map<std::size_t, std::vector<double>>& par_by_threads,
                           double level = 0.999);

// Numeric backends, exposed so tests can cross-check them.
double student_t_quantile(double p, double df);
double regularized_incomplete_beta(double a, double b, double x);
double normal_cdf(double z);
double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);

}  // namespace cowichan
