// cowbench: runs the six-kernel benchmark suite under the in-repo execution
// strategies and reproduces the study's statistical analysis from measurement
// CSVs or the bundled reference dataset.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cowichan/analysis.hpp"
#include "cowichan/coding_time.hpp"
#include "cowichan/io.hpp"
#include "cowichan/validation.hpp"

namespace fs = std::filesystem;
using namespace cowichan;

namespace {

#ifndef COWBENCH_DATA_DIR
#define COWBENCH_DATA_DIR "data"
#endif

fs::path fixture_dir() {
  if (const char* env = std::getenv("COWBENCH_DATA_DIR")) {
    return fs::path(env) / "fixture";
  }
  return fs::path(COWBENCH_DATA_DIR) / "fixture";
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CampaignConfig {
  std::vector<Problem> problems = all_problems();
  std::vector<StrategyKind> strategies = campaign_strategies();
  std::vector<std::size_t> threads{1, 2, 4, 8};
  std::size_t reps = 30;
  std::size_t warmups = 2;
  KernelParams size;  // defaults: 2000/2000/2000, percent 50, seed 42
  bool is_bench = false;
  fs::path out = ".";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Problem> parse_problems(const std::string& list) {
  std::vector<Problem> out;
  for (const auto& name : split_list(list)) {
    const auto p = problem_from_name(name);
    if (!p) throw UsageError("unknown problem '" + name + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw UsageError("problem list is empty");
  return out;
}

std::vector<StrategyKind> parse_strategies(const std::string& list) {
  std::vector<StrategyKind> out;
  for (const auto& name : split_list(list)) {
    const auto s = strategy_from_name(name);
    if (!s) throw UsageError("unknown strategy '" + name + "'");
    out.push_back(*s);
  }
  if (out.empty()) throw UsageError("strategy list is empty");
  return out;
}

std::vector<std::size_t> parse_threads(const std::string& list) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(list)) {
    try {
      const long v = std::stol(item);
      if (v < 1) throw UsageError("thread counts must be >= 1");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("bad thread count '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("thread list is empty");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("bad boolean '" + v + "'");
}

// Flat key=value config, lists comma-separated; unknown keys rejected.
void apply_config_file(CampaignConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "problems") {
        cfg.problems = parse_problems(value);
      } else if (key == "strategies") {
        cfg.strategies = parse_strategies(value);
      } else if (key == "threads") {
        cfg.threads = parse_threads(value);
      } else if (key == "reps") {
        cfg.reps = std::stoul(value);
      } else if (key == "warmups") {
        cfg.warmups = std::stoul(value);
      } else if (key == "size") {
        cfg.size.nrows = cfg.size.ncols = cfg.size.nelts = std::stoul(value);
      } else if (key == "percent") {
        cfg.size.percent = std::stoi(value);
      } else if (key == "seed") {
        cfg.size.seed = static_cast<std::uint32_t>(std::stoul(value));
      } else if (key == "is_bench") {
        cfg.is_bench = parse_bool(value);
      } else if (key == "out") {
        cfg.out = value;
      } else {
        throw UsageError("unknown key '" + key + "'");
      }
    } catch (const UsageError& e) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": bad value for '" + key +
                       "'");
    }
  }
}

struct FileInputs {
  fs::path dir;

  fs::path require(Problem p, const char* name) const {
    fs::path path = dir / name;
    if (!fs::exists(path)) {
      throw Error(std::string("input missing for ") + problem_name(p) + ": " + path.string() +
                  " (run with --is_bench to generate inputs in memory)");
    }
    return path;
  }

  void check(Problem p) const {
    switch (p) {
      case Problem::Randmat:
      case Problem::Chain:
        break;
      case Problem::Thresh:
        require(p, "matrix.txt");
        break;
      case Problem::Winnow:
        require(p, "matrix.txt");
        require(p, "mask.txt");
        break;
      case Problem::Outer:
        require(p, "points.txt");
        break;
      case Problem::Product:
        require(p, "rmatrix.txt");
        require(p, "rvector.txt");
        break;
    }
  }

  KernelInputs load(Problem p) const {
    KernelInputs in;
    const auto open = [&](const fs::path& path) {
      auto stream = std::make_unique<std::ifstream>(path);
      if (!*stream) throw IoError("cannot open " + path.string());
      return stream;
    };
    switch (p) {
      case Problem::Randmat:
      case Problem::Chain:
        break;
      case Problem::Thresh:
        in.matrix = read_int_matrix(*open(require(p, "matrix.txt")), "matrix.txt");
        break;
      case Problem::Winnow:
        in.matrix = read_int_matrix(*open(require(p, "matrix.txt")), "matrix.txt");
        in.mask = read_mask(*open(require(p, "mask.txt")), "mask.txt");
        break;
      case Problem::Outer:
        in.points = read_point_list(*open(require(p, "points.txt")), "points.txt");
        break;
      case Problem::Product:
        in.real_matrix = read_real_matrix(*open(require(p, "rmatrix.txt")), "rmatrix.txt");
        in.real_vector = read_real_vector(*open(require(p, "rvector.txt")), "rvector.txt");
        break;
    }
    return in;
  }
};

void write_outputs(const fs::path& dir, Problem p, const KernelOutput& out) {
  const auto save = [&](const char* name, auto&& writer) {
    std::ofstream f(dir / name);
    if (!f) throw IoError("cannot open " + (dir / name).string() + " for writing");
    writer(f);
  };
  switch (p) {
    case Problem::Randmat:
      save("randmat_output.txt", [&](std::ostream& f) { write_int_matrix(f, *out.matrix); });
      break;
    case Problem::Thresh:
      save("thresh_output.txt", [&](std::ostream& f) { write_mask(f, *out.mask); });
      break;
    case Problem::Winnow:
      save("winnow_output.txt", [&](std::ostream& f) { write_point_list(f, *out.points); });
      break;
    case Problem::Outer:
      save("outer_matrix.txt", [&](std::ostream& f) { write_real_matrix(f, *out.real_matrix); });
      save("outer_vector.txt", [&](std::ostream& f) { write_real_vector(f, *out.real_vector); });
      break;
    case Problem::Product:
      save("product_output.txt", [&](std::ostream& f) { write_real_vector(f, *out.real_vector); });
      break;
    case Problem::Chain:
      save("chain_output.txt", [&](std::ostream& f) { write_real_vector(f, *out.real_vector); });
      break;
  }
}

// The effective campaign plan, in the same key=value format --config reads;
// reloading it reproduces the run.
std::string serialize_config(const CampaignConfig& cfg) {
  std::ostringstream out;
  const auto join = [&](const auto& items, auto name_of) {
    std::string s;
    for (const auto& item : items) {
      if (!s.empty()) s += ',';
      s += name_of(item);
    }
    return s;
  };
  out << "problems=" << join(cfg.problems, [](Problem p) { return problem_name(p); }) << '\n';
  out << "strategies="
      << join(cfg.strategies, [](StrategyKind k) { return strategy_name(k); }) << '\n';
  out << "threads=" << join(cfg.threads, [](std::size_t t) { return std::to_string(t); }) << '\n';
  out << "reps=" << cfg.reps << '\n';
  out << "warmups=" << cfg.warmups << '\n';
  out << "size=" << cfg.size.nrows << '\n';
  out << "percent=" << cfg.size.percent << '\n';
  out << "seed=" << cfg.size.seed << '\n';
  out << "is_bench=" << (cfg.is_bench ? "true" : "false") << '\n';
  out << "out=" << cfg.out.string() << '\n';
  return out.str();
}

int cmd_run(const CampaignConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << cfg.out << "\n";
    return 1;
  }
  write_text_file(cfg.out / "campaign.cfg", serialize_config(cfg));
  FileInputs files{cfg.out};
  if (!cfg.is_bench) {
    try {
      for (Problem p : cfg.problems) files.check(p);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  MeasurementSet all;
  try {
    for (Problem problem : cfg.problems) {
      KernelInputs cached;
      bool have_cached = false;
      const auto inputs_for = [&](Problem p, const KernelParams&) -> KernelInputs {
        if (!have_cached) {
          cached = files.load(p);
          have_cached = true;
        }
        return cached;
      };
      for (StrategyKind kind : cfg.strategies) {
        BenchSpec spec;
        spec.problem = problem;
        spec.variant = kind == StrategyKind::Sequential ? Variant::Seq : Variant::Par;
        spec.strategy = ExecStrategy::of(kind);
        spec.thread_counts = kind == StrategyKind::Sequential
                                 ? std::vector<std::size_t>{1}
                                 : cfg.threads;
        spec.reps = cfg.reps;
        spec.warmups = cfg.warmups;
        spec.size = cfg.size;
        spec.is_bench = cfg.is_bench;
        BenchResult result = cfg.is_bench ? run_benchmark(spec) : run_benchmark(spec, inputs_for);
        all.records.insert(all.records.end(), result.measurements.records.begin(),
                           result.measurements.records.end());
        if (!cfg.is_bench) write_outputs(cfg.out, problem, result.last_output);
        std::cout << problem_name(problem) << " x " << strategy_name(kind) << ": "
                  << result.measurements.records.size() << " records\n";
      }
    }
    std::ofstream csv(cfg.out / "measurements.csv");
    if (!csv) throw IoError("cannot open " + (cfg.out / "measurements.csv").string());
    write_measurements_csv(csv, all);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << (cfg.out / "measurements.csv").string() << " (" << all.records.size()
            << " records)\n";
  return 0;
}

int cmd_analyze(const std::vector<std::string>& csv_paths, bool fixture,
                const std::string& metric_flag, const fs::path& out) {
  std::optional<Metric> only;
  if (!metric_flag.empty()) {
    only = metric_from_name(metric_flag);
    if (!only) throw UsageError("unknown metric '" + metric_flag + "'");
  }
  if (!fixture && csv_paths.empty())
    throw UsageError("analyze needs measurement CSV paths or --fixture");
  try {
    AnalysisReport report;
    if (fixture) {
      report = analyze_fixture(load_fixture(fixture_dir()), only);
    } else {
      MeasurementSet merged;
      for (const auto& path : csv_paths) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path);
        MeasurementSet set = read_measurements_csv(in, path);
        merged.records.insert(merged.records.end(), set.records.begin(), set.records.end());
      }
      report = analyze_measurements(merged, 0.999, only);
    }
    emit_report(report, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "report written to " << out.string() << "\n";
  return 0;
}

int cmd_validate(std::size_t size, std::size_t trials) {
  ValidationOptions options;
  options.max_size = size;
  options.trials = trials;
  if (trials == 0) {
    std::cout << "warning: 0 trials requested; nothing validated (vacuous pass)\n";
    return 0;
  }
  try {
    const ValidationResult result = validate_determinism(options);
    if (result.passed()) {
      std::cout << "validate: " << result.comparisons << " comparisons, all bit-identical\n";
      return 0;
    }
    std::cerr << "validate: " << result.failures.size() << " mismatch(es) out of "
              << result.comparisons << " comparisons\n";
    std::cerr << "first: " << describe(result.failures.front()) << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_coding_time(const std::string& log_path, const std::string& out_path) {
  try {
    std::ifstream in(log_path);
    if (!in) throw IoError("cannot open " + log_path);
    const auto events = parse_commit_log(in);
    const auto times = coding_time_from_log(events);
    const auto table = cumulative_coding_time(times);
    if (out_path.empty()) {
      write_coding_time_csv(std::cout, table);
    } else {
      std::ofstream out(out_path);
      if (!out) throw IoError("cannot open " + out_path + " for writing");
      write_coding_time_csv(out, table);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cowbench: parallel kernel benchmarks and statistical analysis"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a timed benchmark campaign");
  std::string opt_problems, opt_strategies, opt_threads, opt_config;
  std::size_t opt_reps = 0, opt_warmups = 0, opt_size = 0;
  int opt_percent = -1;
  long long opt_seed = -1;
  bool opt_is_bench = false;
  std::string opt_out;
  run->add_option("--problem", opt_problems, "Problems, comma-separated (default: all six)");
  run->add_option("--strategy", opt_strategies,
                  "Strategies, comma-separated (default: blocked-for,fork-join,worker-pool,skeleton)");
  run->add_option("--threads", opt_threads, "Thread counts, comma-separated (default: 1,2,4,8)");
  run->add_option("--reps", opt_reps, "Timed repetitions per thread count (default: 30)");
  run->add_option("--warmups", opt_warmups, "Untimed warmup runs (default: 2)");
  run->add_option("--size", opt_size, "Matrix dimension = nelts (default: 2000)");
  run->add_option("--percent", opt_percent, "thresh percent (default: 50)");
  run->add_option("--seed", opt_seed, "Generator seed (default: 42)");
  run->add_flag("--is_bench", opt_is_bench,
                "Generate inputs in memory and skip all file I/O around the kernels");
  run->add_option("--out", opt_out, "Output directory (default: .)");
  run->add_option("--config", opt_config, "key=value config file; flags override it");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute statistics and reports");
  std::vector<std::string> opt_csvs;
  bool opt_fixture = false;
  std::string opt_metric, opt_report_out = "report";
  analyze->add_option("csv", opt_csvs, "Measurement CSV files");
  analyze->add_flag("--fixture", opt_fixture, "Analyze the bundled reference dataset");
  analyze->add_option("--metric", opt_metric, "Restrict to one metric: loc, coding, exec, speedup");
  analyze->add_option("--out", opt_report_out, "Report directory (default: report)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check strategy outputs against the sequential oracle");
  std::size_t opt_vsize = 200, opt_trials = 20;
  validate->add_option("--size", opt_vsize, "Maximum matrix dimension (default: 200)");
  validate->add_option("--trials", opt_trials, "Random parameter draws (default: 20)");

  // coding-time
  auto* coding = app.add_subcommand("coding-time", "Extract coding time from a commit log");
  std::string opt_log, opt_ct_out;
  coding->add_option("log", opt_log, "Commit log file")->required();
  coding->add_option("--out", opt_ct_out, "Output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) {
      CampaignConfig cfg;
      if (!opt_config.empty()) apply_config_file(cfg, opt_config);
      if (run->count("--problem")) cfg.problems = parse_problems(opt_problems);
      if (run->count("--strategy")) cfg.strategies = parse_strategies(opt_strategies);
      if (run->count("--threads")) cfg.threads = parse_threads(opt_threads);
      if (run->count("--reps")) cfg.reps = opt_reps;
      if (run->count("--warmups")) cfg.warmups = opt_warmups;
      if (run->count("--size")) cfg.size.nrows = cfg.size.ncols = cfg.size.nelts = opt_size;
      if (run->count("--percent")) cfg.size.percent = opt_percent;
      if (run->count("--seed")) cfg.size.seed = static_cast<std::uint32_t>(opt_seed);
      if (run->count("--is_bench")) cfg.is_bench = true;
      if (run->count("--out")) cfg.out = opt_out;
      if (cfg.reps < 1) throw UsageError("--reps must be >= 1");
      try {
        cfg.size.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      return cmd_run(cfg);
    }
    if (analyze->parsed()) {
      return cmd_analyze(opt_csvs, opt_fixture, opt_metric, opt_report_out);
    }
    if (validate->parsed()) {
      return cmd_validate(opt_vsize, opt_trials);
    }
    if (coding->parsed()) {
      return cmd_coding_time(opt_log, opt_ct_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
