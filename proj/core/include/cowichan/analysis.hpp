#pragma once

#include <filesystem>
#include <map>
#include <optional>

#include "cowichan/bench.hpp"
#include "cowichan/report.hpp"
#include "cowichan/stats.hpp"

namespace cowichan {

/// Mean and interval for one (paradigm, problem, variant, threads) group of
/// timed samples.
struct CellStats {
  std::string paradigm;
  std::string problem;
  std::string variant;
  std::size_t threads = 1;
  std::size_t reps = 0;
  double mean_seconds = 0.0;
  std::optional<ConfidenceInterval> ci;
};

struct AnalysisReport {
  std::map<Metric, MetricTable> tables;       // ordering tables, smaller is better
  std::map<Metric, MetricTable> normalized;
  std::map<Metric, std::map<std::string, double>> ratings;
  std::map<Metric, OrderingGraph> graphs;
  std::map<Metric, DiffTable> diffs;          // expert / non-expert, raw values
  std::vector<SpeedupCurve> curves;
  std::vector<CellStats> cells;
};

/// The bundled reference dataset: metric -> variant -> values per
/// (paradigm, problem). The speedup table holds raw speedups (larger is
/// better) and is inverted before rating or ordering.
using FixtureTables = std::map<Metric, std::map<Variant, MetricTable>>;

/// Loads <dir>/{loc,coding,exec,speedup}.csv, each line
/// paradigm,problem,variant,value ('#' comments allowed).
FixtureTables load_fixture(const std::filesystem::path& dir);

/// Full statistical pipeline over the fixture: expert-par values feed the
/// ratings, pairwise tests, and ordering graphs; expert/non-expert diffs are
/// computed where both variants exist.
AnalysisReport analyze_fixture(const FixtureTables& fixture,
                               std::optional<Metric> only = std::nullopt);

/// Pipeline over timed measurements: means and intervals per cell, speedup
/// curves per (paradigm, problem), and, for paradigms covering every
/// problem, execution-time and inverse-speedup tables with ratings and
/// ordering graphs.
AnalysisReport analyze_measurements(const MeasurementSet& set, double level = 0.999,
                                    std::optional<Metric> only = std::nullopt);

/// Writes report.json, report.md, per-metric CSVs and DOT files. Emission is
/// deterministic: identical report, identical bytes.
void emit_report(const AnalysisReport& report, const std::filesystem::path& out_dir);

}  // namespace cowichan
