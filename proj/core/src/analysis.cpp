#include "cowichan/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cowichan/io.hpp"

namespace cowichan {

namespace {

using nlohmann::json;

MetricTable* find_variant_table(std::map<Variant, MetricTable>& tables, Variant v) {
  auto it = tables.find(v);
  return it == tables.end() ? nullptr : &it->second;
}

}  // namespace

FixtureTables load_fixture(const std::filesystem::path& dir) {
  FixtureTables fixture;
  for (Metric metric : all_metrics()) {
    const auto path = dir / (std::string(metric_name(metric)) + ".csv");
    std::ifstream in(path);
    if (!in) throw IoError("fixture file not found: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      if (line == "paradigm,problem,variant,value") continue;
      std::istringstream ss(line);
      std::string paradigm, problem, variant, value;
      if (!std::getline(ss, paradigm, ',') || !std::getline(ss, problem, ',') ||
          !std::getline(ss, variant, ',') || !std::getline(ss, value)) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 4 fields");
      }
      const auto var = variant_from_name(variant);
      if (!var)
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": unknown variant '" +
                         variant + "'");
      double v = 0.0;
      try {
        v = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad value '" + value +
                         "'");
      }
      MetricTable& table = fixture[metric][*var];
      table.metric = metric;
      table.set(paradigm, problem, v);
    }
  }
  return fixture;
}

namespace {

// Shared tail: normalized table, ratings, pairwise tests + ordering graph.
void derive_metric_artifacts(AnalysisReport& report, Metric metric,
                             const MetricTable& ordering_table) {
  report.tables[metric] = ordering_table;
  report.normalized[metric] = normalize(ordering_table);
  report.ratings[metric] = rating(ordering_table);
  report.graphs[metric] = ordering_graph(ordering_table);
}

}  // namespace

AnalysisReport analyze_fixture(const FixtureTables& fixture, std::optional<Metric> only) {
  AnalysisReport report;
  for (const auto& [metric, by_variant] : fixture) {
    if (only && metric != *only) continue;
    auto variants = by_variant;  // local copy for lookup convenience
    MetricTable* expert = find_variant_table(variants, Variant::ExpertPar);
    MetricTable* par = find_variant_table(variants, Variant::Par);
    const MetricTable* analysis = expert ? expert : par;
    if (!analysis) continue;

    MetricTable ordering_table = *analysis;
    if (metric == Metric::InverseSpeedup) {
      ordering_table = invert_for_speedup(ordering_table);
    }
    derive_metric_artifacts(report, metric, ordering_table);

    if (expert && par) {
      report.diffs[metric] = diff_table(*expert, *par);
    }
  }
  return report;
}

AnalysisReport analyze_measurements(const MeasurementSet& set, double level,
                                    std::optional<Metric> only) {
  AnalysisReport report;
  if (set.records.empty()) throw Error("no records");

  // (paradigm, problem, variant, threads) -> ordered samples
  std::map<std::tuple<std::string, std::string, std::string, std::size_t>, std::vector<double>>
      groups;
  for (const auto& r : set.records) {
    groups[{r.paradigm, r.problem, r.variant, r.threads}].push_back(r.seconds);
  }
  for (const auto& [key, samples] : groups) {
    CellStats cell;
    cell.paradigm = std::get<0>(key);
    cell.problem = std::get<1>(key);
    cell.variant = std::get<2>(key);
    cell.threads = std::get<3>(key);
    cell.reps = samples.size();
    cell.mean_seconds = mean(samples);
    if (samples.size() >= 2) cell.ci = mean_ci(samples, level);
    report.cells.push_back(std::move(cell));
  }

  // Speedup curves per (paradigm, problem) with parallel samples at 1 thread.
  std::map<std::pair<std::string, std::string>, std::map<std::size_t, std::vector<double>>>
      par_samples;
  std::map<std::pair<std::string, std::string>, std::vector<double>> seq_samples;
  for (const auto& [key, samples] : groups) {
    const auto& variant = std::get<2>(key);
    const std::pair<std::string, std::string> cell{std::get<0>(key), std::get<1>(key)};
    if (variant == variant_name(Variant::Par) || variant == variant_name(Variant::ExpertPar)) {
      auto& dest = par_samples[cell][std::get<3>(key)];
      dest.insert(dest.end(), samples.begin(), samples.end());
    } else if (variant == variant_name(Variant::Seq) ||
               variant == variant_name(Variant::ExpertSeq)) {
      auto& dest = seq_samples[cell];
      dest.insert(dest.end(), samples.begin(), samples.end());
    }
  }
  for (const auto& [cell, by_threads] : par_samples) {
    if (!by_threads.count(1)) continue;
    const auto seq = seq_samples.find(cell);
    report.curves.push_back(speedup_curve(cell.first, cell.second,
                                          seq == seq_samples.end() ? nullptr : &seq->second,
                                          by_threads, level));
  }

  // Ordering tables need complete coverage: keep paradigms that measured
  // every problem seen in the set.
  std::set<std::string> problem_set;
  for (const auto& [cell, _] : par_samples) problem_set.insert(cell.second);
  MetricTable exec_table;
  exec_table.metric = Metric::ExecTime;
  MetricTable speedup_table;
  speedup_table.metric = Metric::InverseSpeedup;
  std::map<std::string, std::size_t> coverage;
  for (const auto& [cell, by_threads] : par_samples) {
    const std::size_t max_threads = by_threads.rbegin()->first;
    exec_table.set(cell.first, cell.second, mean(by_threads.at(max_threads)));
    ++coverage[cell.first];
  }
  for (const auto& curve : report.curves) {
    if (curve.points.empty()) continue;
    speedup_table.set(curve.paradigm, curve.problem, curve.points.rbegin()->second.value);
  }
  const auto prune = [&](MetricTable& t) {
    for (auto it = t.values.begin(); it != t.values.end();) {
      if (it->second.size() != problem_set.size()) {
        it = t.values.erase(it);
      } else {
        ++it;
      }
    }
  };
  prune(exec_table);
  prune(speedup_table);

  if (!exec_table.values.empty() && (!only || *only == Metric::ExecTime)) {
    derive_metric_artifacts(report, Metric::ExecTime, exec_table);
  }
  if (!speedup_table.values.empty() && (!only || *only == Metric::InverseSpeedup)) {
    derive_metric_artifacts(report, Metric::InverseSpeedup, invert_for_speedup(speedup_table));
  }
  return report;
}

namespace {

json ci_to_json(const ConfidenceInterval& ci) {
  return json{{"estimate", ci.estimate},
              {"lo", ci.lo},
              {"hi", ci.hi},
              {"level", ci.level},
              {"unbounded", ci.unbounded}};
}

json table_to_json(const std::map<std::string, std::map<std::string, double>>& values) {
  json out = json::object();
  for (const auto& [L, row] : values) {
    json jrow = json::object();
    for (const auto& [P, v] : row) jrow[P] = v;
    out[L] = std::move(jrow);
  }
  return out;
}

std::string format_md(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string format_rating(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

void emit_report(const AnalysisReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  json root;
  root["metrics"] = json::object();
  root["ratings"] = json::object();
  root["pairwise"] = json::object();
  root["graphs"] = json::object();
  root["speedups"] = json::array();
  root["diffs"] = json::object();

  for (const auto& [metric, table] : report.tables) {
    json m;
    m["values"] = table_to_json(table.values);
    const auto norm = report.normalized.find(metric);
    if (norm != report.normalized.end()) m["normalized"] = table_to_json(norm->second.values);
    root["metrics"][metric_name(metric)] = std::move(m);
  }
  if (!report.cells.empty()) {
    json cells = json::array();
    for (const auto& c : report.cells) {
      json jc{{"paradigm", c.paradigm}, {"problem", c.problem},   {"variant", c.variant},
              {"threads", c.threads},   {"reps", c.reps},         {"mean_seconds", c.mean_seconds}};
      if (c.ci) jc["ci"] = ci_to_json(*c.ci);
      cells.push_back(std::move(jc));
    }
    root["metrics"]["cells"] = std::move(cells);
  }
  for (const auto& [metric, ratings] : report.ratings) {
    json jr = json::object();
    for (const auto& [L, r] : ratings) jr[L] = r;
    root["ratings"][metric_name(metric)] = std::move(jr);
  }
  for (const auto& [metric, graph] : report.graphs) {
    json pw = json::array();
    for (const auto& p : graph.pairwise) {
      json jp{{"a", p.a},
              {"b", p.b},
              {"p_value", p.p_value},
              {"strength", strength_name(p.strength)}};
      jp["better"] = p.better ? json(*p.better) : json(nullptr);
      pw.push_back(std::move(jp));
    }
    root["pairwise"][metric_name(metric)] = std::move(pw);

    json jg;
    jg["nodes"] = json::array();
    for (const auto& n : graph.nodes) {
      jg["nodes"].push_back(json{{"paradigm", n.paradigm}, {"rating", n.rating}});
    }
    jg["edges"] = json::array();
    for (const auto& e : graph.edges) {
      jg["edges"].push_back(
          json{{"from", e.from}, {"to", e.to}, {"style", edge_style_name(e.style)}});
    }
    root["graphs"][metric_name(metric)] = std::move(jg);
  }
  for (const auto& curve : report.curves) {
    json jc{{"paradigm", curve.paradigm},
            {"problem", curve.problem},
            {"baseline", baseline_name(curve.baseline)}};
    jc["points"] = json::array();
    for (const auto& [threads, point] : curve.points) {
      json jp{{"threads", threads}, {"speedup", point.value}};
      jp["ci"] = point.ci ? ci_to_json(*point.ci) : json(nullptr);
      jc["points"].push_back(std::move(jp));
    }
    root["speedups"].push_back(std::move(jc));
  }
  for (const auto& [metric, diff] : report.diffs) {
    root["diffs"][metric_name(metric)] = table_to_json(diff.cells);
  }
  write_text_file(out_dir / "report.json", root.dump(2) + "\n");

  // Per-metric artifacts.
  for (const auto& [metric, graph] : report.graphs) {
    write_text_file(out_dir / (std::string(metric_name(metric)) + ".dot"), emit_dot(graph));
  }
  for (const auto& [metric, table] : report.tables) {
    std::ostringstream csv;
    csv << "paradigm,problem,value\n";
    for (const auto& [L, row] : table.values) {
      for (const auto& [P, v] : row) csv << L << ',' << P << ',' << format_real(v) << '\n';
    }
    write_text_file(out_dir / (std::string(metric_name(metric)) + "_values.csv"), csv.str());
  }
  for (const auto& [metric, diff] : report.diffs) {
    std::ostringstream csv;
    csv << "paradigm,problem,expert_over_nonexpert\n";
    for (const auto& [L, row] : diff.cells) {
      for (const auto& [P, v] : row) csv << L << ',' << P << ',' << format_real(v) << '\n';
    }
    write_text_file(out_dir / (std::string(metric_name(metric)) + "_diff.csv"), csv.str());
  }
  if (!report.ratings.empty()) {
    std::ostringstream csv;
    csv << "metric,paradigm,rating\n";
    for (const auto& [metric, ratings] : report.ratings) {
      for (const auto& [L, r] : ratings) {
        csv << metric_name(metric) << ',' << L << ',' << format_real(r) << '\n';
      }
    }
    write_text_file(out_dir / "ratings.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "metric,a,b,p_value,better,strength\n";
    for (const auto& [metric, graph] : report.graphs) {
      for (const auto& p : graph.pairwise) {
        csv << metric_name(metric) << ',' << p.a << ',' << p.b << ',' << format_real(p.p_value)
            << ',' << (p.better ? *p.better : "") << ',' << strength_name(p.strength) << '\n';
      }
    }
    write_text_file(out_dir / "pairwise.csv", csv.str());
  }
  if (!report.curves.empty()) {
    std::ostringstream csv;
    csv << "paradigm,problem,baseline,threads,speedup,ci_lo,ci_hi\n";
    for (const auto& curve : report.curves) {
      for (const auto& [threads, point] : curve.points) {
        csv << curve.paradigm << ',' << curve.problem << ',' << baseline_name(curve.baseline)
            << ',' << threads << ',' << format_real(point.value) << ',';
        if (point.ci) csv << format_real(point.ci->lo);
        csv << ',';
        if (point.ci) csv << format_real(point.ci->hi);
        csv << '\n';
      }
    }
    write_text_file(out_dir / "speedup_curves.csv", csv.str());
  }
  if (!report.cells.empty()) {
    std::ostringstream csv;
    csv << "paradigm,problem,variant,threads,reps,mean_seconds,ci_lo,ci_hi\n";
    for (const auto& c : report.cells) {
      csv << c.paradigm << ',' << c.problem << ',' << c.variant << ',' << c.threads << ','
          << c.reps << ',' << format_real(c.mean_seconds) << ',';
      if (c.ci) csv << format_real(c.ci->lo);
      csv << ',';
      if (c.ci) csv << format_real(c.ci->hi);
      csv << '\n';
    }
    write_text_file(out_dir / "cells.csv", csv.str());
  }

  // Markdown summary: the ratings matrix (paradigms x metrics), then the
  // pairwise orderings per metric.
  std::ostringstream md;
  md << "# Analysis summary\n\n";
  if (!report.ratings.empty()) {
    std::set<std::string> paradigms;
    for (const auto& [_, ratings] : report.ratings) {
      for (const auto& [L, __] : ratings) paradigms.insert(L);
    }
    md << "## Ratings (smaller is better)\n\n";
    md << "| Paradigm |";
    for (const auto& [metric, _] : report.ratings) md << ' ' << metric_name(metric) << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < report.ratings.size(); ++i) md << "---|";
    md << '\n';
    for (const auto& L : paradigms) {
      md << "| " << L << " |";
      for (const auto& [_, ratings] : report.ratings) {
        const auto it = ratings.find(L);
        md << ' ' << (it == ratings.end() ? std::string("-") : format_rating(it->second)) << " |";
      }
      md << '\n';
    }
    md << '\n';
  }
  for (const auto& [metric, graph] : report.graphs) {
    md << "## Ordering: " << metric_name(metric) << "\n\n";
    if (graph.edges.empty()) {
      md << "No significant pairwise differences.\n\n";
      continue;
    }
    for (const auto& e : graph.edges) {
      md << "- " << e.to << " beats " << e.from
         << (e.style == EdgeStyle::Dotted ? " (tends, p < 0.1)" : " (p < 0.05)") << '\n';
    }
    md << '\n';
  }
  for (const auto& [metric, diff] : report.diffs) {
    md << "## Expert / non-expert ratio: " << metric_name(metric) << "\n\n";
    std::vector<std::string> problems;
    for (const auto& [_, row] : diff.cells) {
      for (const auto& [P, __] : row) {
        if (std::find(problems.begin(), problems.end(), P) == problems.end())
          problems.push_back(P);
      }
    }
    std::sort(problems.begin(), problems.end());
    md << "| Paradigm |";
    for (const auto& P : problems) md << ' ' << P << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < problems.size(); ++i) md << "---|";
    md << '\n';
    for (const auto& [L, row] : diff.cells) {
      md << "| " << L << " |";
      for (const auto& P : problems) {
        const auto it = row.find(P);
        md << ' ' << (it == row.end() ? std::string("-") : format_md(it->second)) << " |";
      }
      md << '\n';
    }
    md << '\n';
  }
  write_text_file(out_dir / "report.md", md.str());
}

}  // namespace cowichan
