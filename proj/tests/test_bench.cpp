#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <doctest.h>

#include <chrono>
#include <random>
#include <sstream>
#include <thread>

#include "cowichan/bench.hpp"
#include "cowichan/coding_time.hpp"
#include "cowichan/io.hpp"
#include "cowichan/validation.hpp"

using namespace cowichan;

namespace {

BenchSpec small_spec(Problem p) {
  BenchSpec spec;
  spec.problem = p;
  spec.strategy = ExecStrategy::of(StrategyKind::WorkerPool);
  spec.thread_counts = {1, 2, 4};
  spec.reps = 30;
  spec.warmups = 1;
  spec.size.nrows = spec.size.ncols = spec.size.nelts = 16;
  spec.size.percent = 60;
  spec.size.seed = 5;
  return spec;
}

std::string log_line(const std::string& ts, const std::string& msg) {
  return ts + "\t" + msg + "\n";
}

std::vector<CommitEvent> parse_log_text(const std::string& text) {
  std::istringstream in(text);
  return parse_commit_log(in);
}

}  // namespace

TEST_CASE("run_benchmark: record count is |threadCounts| x reps") {
  const BenchResult result = run_benchmark(small_spec(Problem::Randmat));
  CHECK(result.measurements.records.size() == 90);
  for (const auto& r : result.measurements.records) {
    CHECK(r.paradigm == "worker-pool");
    CHECK(r.problem == "randmat");
    CHECK(r.variant == "par");
    CHECK(r.seconds > 0.0);
  }
}

TEST_CASE("run_benchmark: the timed region excludes input construction") {
  BenchSpec spec = small_spec(Problem::Thresh);
  spec.thread_counts = {1};
  spec.reps = 3;
  spec.warmups = 0;
  const auto slow_inputs = [](Problem p, const KernelParams& size) {
    std::this_thread::sleep_for(std::chrono::milliseconds(25));
    return generate_input(p, size);
  };
  const BenchResult result = run_benchmark(spec, slow_inputs);
  REQUIRE(result.measurements.records.size() == 3);
  for (const auto& r : result.measurements.records) {
    CHECK(r.seconds < 0.010);  // the 25 ms of synthesis must not be timed
  }
}

TEST_CASE("time_seconds: a no-op stays far under a millisecond") {
  CHECK(time_seconds([] {}) < 1e-3);
}

TEST_CASE("run_benchmark: kernel failures abort with campaign context") {
  BenchSpec spec = small_spec(Problem::Winnow);
  spec.size.percent = 0;  // all-false mask, winnow cannot succeed
  spec.thread_counts = {2};
  spec.reps = 2;
  spec.warmups = 0;
  const auto inputs = [](Problem, const KernelParams& size) {
    KernelInputs in;
    in.matrix = randmat(size.nrows, size.ncols, size.seed, ExecStrategy::sequential());
    in.mask = Mask(size.nrows, size.ncols);  // nothing set
    return in;
  };
  CHECK_THROWS_WITH_AS(run_benchmark(spec, inputs),
                       doctest::Contains("problem=winnow"), Error);
  try {
    run_benchmark(spec, inputs);
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("threads=2") != std::string::npos);
    CHECK(what.find("rep=0") != std::string::npos);
  }
}

TEST_CASE("generate_input: mirrors the chain stages deterministically") {
  KernelParams size;
  size.nrows = size.ncols = size.nelts = 100;
  size.percent = 50;
  size.seed = 42;
  const ExecStrategy seq = ExecStrategy::sequential();

  const KernelInputs thresh_in = generate_input(Problem::Thresh, size);
  REQUIRE(thresh_in.matrix.has_value());
  CHECK(*thresh_in.matrix == randmat(100, 100, 42, seq));

  // The generated inputs equal the chain intermediates at the same seed.
  const IntMatrix m = randmat(100, 100, 42, seq);
  const Mask mask = thresh(m, 50, seq);
  const PointList pts = winnow(m, mask, 100, seq);
  const auto [dist, vec] = outer(pts, seq);

  const KernelInputs winnow_in = generate_input(Problem::Winnow, size);
  CHECK(*winnow_in.matrix == m);
  CHECK(*winnow_in.mask == mask);
  const KernelInputs outer_in = generate_input(Problem::Outer, size);
  CHECK(*outer_in.points == pts);
  const KernelInputs product_in = generate_input(Problem::Product, size);
  CHECK(*product_in.real_matrix == dist);
  CHECK(*product_in.real_vector == vec);

  // same bytes across repeated calls
  const KernelInputs again = generate_input(Problem::Product, size);
  CHECK(*again.real_matrix == *product_in.real_matrix);
  CHECK(*again.real_vector == *product_in.real_vector);
}

TEST_CASE("generate_input: winnow shortage fails before any timing") {
  KernelParams size;
  size.nrows = size.ncols = 4;
  size.nelts = 4;
  size.percent = 0;
  CHECK_THROWS_AS(generate_input(Problem::Outer, size), InsufficientCandidatesError);
}

TEST_CASE("measurement CSV round-trips") {
  MeasurementSet set;
  set.records = {{"worker-pool", "randmat", "par", 4, 0, 0.12345678901234567},
                 {"skeleton", "chain", "seq", 1, 3, 2.5e-4}};
  std::ostringstream out;
  write_measurements_csv(out, set);
  std::istringstream in(out.str());
  const MeasurementSet back = read_measurements_csv(in);
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[0].paradigm == "worker-pool");
  CHECK(back.records[0].seconds == set.records[0].seconds);
  CHECK(back.records[1].threads == 1);
  CHECK(back.records[1].rep == 3);
  CHECK(back.records[1].seconds == set.records[1].seconds);
}

TEST_CASE("measurement CSV: parse errors name the line") {
  std::istringstream in("paradigm,problem,variant,threads,rep,seconds\nbad line\n");
  CHECK_THROWS_WITH_AS(read_measurements_csv(in, "m.csv"), doctest::Contains("m.csv:2"),
                       ParseError);
}

TEST_CASE("coding time: single start/done interval") {
  const auto events = parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-seq start") +
                                     log_line("2013-01-07T09:10:00", "go-randmat-seq done"));
  const auto times = coding_time_from_log(events);
  REQUIRE(times.size() == 1);
  CHECK(times[0].language == "go");
  CHECK(times[0].problem == "randmat");
  CHECK(times[0].variant == Variant::Seq);
  CHECK(times[0].minutes == doctest::Approx(10.0));
}

TEST_CASE("coding time: pause and resume accumulate 30 + 20 minutes") {
  const auto events = parse_log_text(log_line("2013-01-07T09:00:00", "cilk-thresh-par start") +
                                     log_line("2013-01-07T09:30:00", "cilk-thresh-par pause") +
                                     log_line("2013-01-07T09:50:00", "cilk-thresh-par resume") +
                                     log_line("2013-01-07T10:10:00", "cilk-thresh-par done"));
  const auto times = coding_time_from_log(events);
  REQUIRE(times.size() == 1);
  CHECK(times[0].minutes == doctest::Approx(50.0));
}

TEST_CASE("coding time: interleaved streams are separated") {
  const auto events =
      parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-seq start") +
                     log_line("2013-01-07T09:05:00", "tbb-outer-expertpar start") +
                     log_line("2013-01-07T09:10:00", "go-randmat-seq done") +
                     log_line("2013-01-07T09:20:00", "tbb-outer-expertpar done"));
  const auto times = coding_time_from_log(events);
  REQUIRE(times.size() == 2);
  CHECK(times[0].minutes == doctest::Approx(10.0));
  CHECK(times[1].variant == Variant::ExpertPar);
  CHECK(times[1].minutes == doctest::Approx(15.0));
}

TEST_CASE("coding time: transition violations name the offending event") {
  // done with no prior start
  CHECK_THROWS_WITH_AS(
      coding_time_from_log(parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-seq done"))),
      doctest::Contains("go-randmat-seq done"), MalformedLogError);
  // resume before start
  CHECK_THROWS_AS(coding_time_from_log(parse_log_text(
                      log_line("2013-01-07T09:00:00", "go-randmat-seq resume"))),
                  MalformedLogError);
  // pause while paused
  CHECK_THROWS_AS(
      coding_time_from_log(parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-seq start") +
                                          log_line("2013-01-07T09:01:00", "go-randmat-seq pause") +
                                          log_line("2013-01-07T09:02:00", "go-randmat-seq pause"))),
      MalformedLogError);
  // missing done
  CHECK_THROWS_WITH_AS(
      coding_time_from_log(parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-seq start"))),
      doctest::Contains("without done"), MalformedLogError);
  // start after done
  CHECK_THROWS_AS(
      coding_time_from_log(parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-seq start") +
                                          log_line("2013-01-07T09:01:00", "go-randmat-seq done") +
                                          log_line("2013-01-07T09:02:00", "go-randmat-seq start"))),
      MalformedLogError);
}

TEST_CASE("commit log grammar: malformed lines are rejected with line numbers") {
  CHECK_THROWS_WITH_AS(parse_log_text("2013-01-07T09:00:00 go-randmat-seq start\n"),
                       doctest::Contains("line 1"), MalformedLogError);  // no tab
  CHECK_THROWS_AS(parse_log_text(log_line("2013-01-07T09:00:00", "gorandmatseq start")),
                  MalformedLogError);  // no hyphens
  CHECK_THROWS_AS(parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-expert-par start")),
                  MalformedLogError);  // four hyphen-separated parts
  CHECK_THROWS_AS(parse_log_text(log_line("2013-01-07T09:00:00", "go-sort-seq start")),
                  MalformedLogError);  // unknown problem
  CHECK_THROWS_AS(parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-seq begin")),
                  MalformedLogError);  // unknown keyword
  CHECK_THROWS_AS(parse_log_text(log_line("not-a-time", "go-randmat-seq start")),
                  MalformedLogError);
  // hyphenless expert variants are the accepted spellings
  const auto events = parse_log_text(log_line("2013-01-07T09:00:00", "go-randmat-expertpar start") +
                                     log_line("2013-01-07T09:01:00", "go-randmat-expertpar done"));
  CHECK(events.size() == 2);
  CHECK(events[0].variant == Variant::ExpertPar);
}

TEST_CASE("commit log: timestamps accept zone designators") {
  const auto utc = parse_log_text(log_line("2013-01-07T10:00:00Z", "go-randmat-seq start") +
                                  log_line("2013-01-07T10:10:00Z", "go-randmat-seq done"));
  const auto offset = parse_log_text(log_line("2013-01-07T11:00:00+01:00", "go-randmat-seq start") +
                                     log_line("2013-01-07T11:10:00+01:00", "go-randmat-seq done"));
  CHECK(utc[0].timestamp == offset[0].timestamp);
  CHECK(coding_time_from_log(offset)[0].minutes == doctest::Approx(10.0));
}

TEST_CASE("cumulative coding time: increments stack up") {
  std::vector<CodingTime> raw{{"cilk", "randmat", Variant::Seq, 10.0},
                              {"cilk", "randmat", Variant::Par, 20.0},
                              {"cilk", "randmat", Variant::ExpertPar, 5.0}};
  const auto table = cumulative_coding_time(raw);
  const auto& cells = table.at({"cilk", "randmat"});
  CHECK(*cells.at(Variant::Seq).cumulative_minutes == doctest::Approx(10.0));
  CHECK(*cells.at(Variant::Par).cumulative_minutes == doctest::Approx(30.0));
  CHECK(*cells.at(Variant::ExpertPar).cumulative_minutes == doctest::Approx(35.0));
  CHECK(cells.find(Variant::ExpertSeq) == cells.end());  // absent, not zero

  std::ostringstream out;
  write_coding_time_csv(out, table);
  const std::string csv = out.str();
  CHECK(csv.find("cilk,randmat,expert-par,5,35\n") != std::string::npos);
  CHECK(csv.find("cilk,randmat,expert-seq,,\n") != std::string::npos);
}

TEST_CASE("validate_determinism: clean build passes a small suite") {
  ValidationOptions options;
  options.max_size = 24;
  options.trials = 3;
  options.thread_counts = {1, 3};
  const ValidationResult result = validate_determinism(options);
  CHECK(result.passed());
  CHECK(result.comparisons > 0);
}

TEST_CASE("validate_determinism: injected faults are caught with cell coordinates") {
  ValidationOptions options;
  options.max_size = 16;
  options.trials = 1;
  options.strategies = {StrategyKind::WorkerPool};
  options.thread_counts = {2};
  options.perturb = [](Problem p, KernelOutput& out) {
    if (p == Problem::Randmat && out.matrix) {
      out.matrix->at(0, 0) = (out.matrix->at(0, 0) + 1) % 100;
    }
  };
  const ValidationResult result = validate_determinism(options);
  REQUIRE_FALSE(result.passed());
  const std::string detail = describe(result.failures.front());
  CHECK(detail.find("randmat") != std::string::npos);
  CHECK(detail.find("cell (0, 0)") != std::string::npos);
}

TEST_CASE("text formats round-trip") {
  std::mt19937 gen(11);
  std::uniform_int_distribution<std::uint32_t> cell(0, 99);
  IntMatrix m(7, 5);
  for (auto& v : m.data) v = cell(gen);
  std::stringstream ms;
  write_int_matrix(ms, m);
  CHECK(read_int_matrix(ms) == m);

  RealVector v(9);
  std::uniform_real_distribution<double> real(-1e6, 1e6);
  for (auto& x : v.values) x = real(gen) / 3.0;  // non-terminating decimals
  v.values[0] = 0.1 + 0.2;                       // classic round-trip hazard
  std::stringstream vs;
  write_real_vector(vs, v);
  CHECK(read_real_vector(vs) == v);  // 17 significant digits are lossless

  PointList pts;
  pts.points = {{0, 0}, {12, 3}, {7, 7}};
  std::stringstream ps;
  write_point_list(ps, pts);
  CHECK(read_point_list(ps) == pts);
}

TEST_CASE("coding time parser agrees with a transition-table oracle") {
  // Oracle: table-driven validity plus interval sums, structured separately
  // from the parser's switch.
  enum State { I, R, P, D, X };
  static const auto next_state = [](State s, CommitKeyword k) -> State {
    switch (s) {
      case I: return k == CommitKeyword::Start ? R : X;
      case R:
        if (k == CommitKeyword::Pause) return P;
        if (k == CommitKeyword::Done) return D;
        return X;
      case P: return k == CommitKeyword::Resume ? R : X;
      default: return X;
    }
  };

  std::mt19937 gen(31415);
  std::uniform_int_distribution<int> kw(0, 3), len(1, 8), coin(0, 99);
  int valid_seen = 0, invalid_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = len(gen);
    std::vector<CommitKeyword> keywords;
    for (int i = 0; i < n; ++i) {
      keywords.push_back(static_cast<CommitKeyword>(kw(gen)));
    }
    // half the time, steer toward a valid sequence
    if (coin(gen) < 50) {
      State s = I;
      for (auto& k : keywords) {
        if (s == I) k = CommitKeyword::Start;
        else if (s == R) k = coin(gen) < 50 ? CommitKeyword::Pause : CommitKeyword::Done;
        else if (s == P) k = CommitKeyword::Resume;
        else k = CommitKeyword::Done;  // will be invalid past done
        s = next_state(s, k);
      }
      if (s == R) keywords.push_back(CommitKeyword::Done), s = D;
      if (s == P) {
        keywords.push_back(CommitKeyword::Resume);
        keywords.push_back(CommitKeyword::Done);
      }
    }

    // oracle verdict + minutes
    State s = I;
    double active_from = 0.0, total = 0.0;
    bool valid = true;
    std::vector<double> stamps;
    double t = 0.0;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
      t += 60.0 * (1 + (i % 3));
      stamps.push_back(t);
    }
    for (std::size_t i = 0; i < keywords.size() && valid; ++i) {
      const State ns = next_state(s, keywords[i]);
      if (ns == X) {
        valid = false;
        break;
      }
      if (keywords[i] == CommitKeyword::Start || keywords[i] == CommitKeyword::Resume) {
        active_from = stamps[i];
      } else {
        total += stamps[i] - active_from;
      }
      s = ns;
    }
    if (s != D) valid = false;

    // build the log text
    std::string text;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
      const long long minute = static_cast<long long>(stamps[i] / 60.0);
      char ts[64];
      std::snprintf(ts, sizeof ts, "2013-01-07T%02lld:%02lld:00", 9 + minute / 60, minute % 60);
      text += log_line(ts, std::string("go-randmat-par ") + keyword_name(keywords[i]));
    }
    const auto events = parse_log_text(text);
    if (valid) {
      ++valid_seen;
      const auto times = coding_time_from_log(events);
      REQUIRE(times.size() == 1);
      CHECK(times[0].minutes == doctest::Approx(total / 60.0));
    } else {
      ++invalid_seen;
      CHECK_THROWS_AS(coding_time_from_log(events), MalformedLogError);
    }
  }
  CHECK(valid_seen > 50);
  CHECK(invalid_seen > 50);
}
