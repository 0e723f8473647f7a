#include "cowichan/bench.hpp"

#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

#include "cowichan/io.hpp"

namespace cowichan {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Seq: return "seq";
    case Variant::Par: return "par";
    case Variant::ExpertSeq: return "expert-seq";
    case Variant::ExpertPar: return "expert-par";
  }
  return "unknown";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  if (name == "seq") return Variant::Seq;
  if (name == "par") return Variant::Par;
  if (name == "expert-seq" || name == "expertseq") return Variant::ExpertSeq;
  if (name == "expert-par" || name == "expertpar") return Variant::ExpertPar;
  return std::nullopt;
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> variants{Variant::Seq, Variant::Par, Variant::ExpertSeq,
                                             Variant::ExpertPar};
  return variants;
}

void write_measurements_csv(std::ostream& out, const MeasurementSet& set) {
  out << "paradigm,problem,variant,threads,rep,seconds\n";
  for (const auto& r : set.records) {
    out << r.paradigm << ',' << r.problem << ',' << r.variant << ',' << r.threads << ','
        << r.rep << ',' << format_real(r.seconds) << '\n';
  }
}

MeasurementSet read_measurements_csv(std::istream& in, const std::string& context) {
  MeasurementSet set;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      if (line != "paradigm,problem,variant,threads,rep,seconds")
        throw ParseError(context + ":" + std::to_string(lineno) + ": unexpected header '" + line + "'");
      have_header = true;
      continue;
    }
    std::istringstream ss(line);
    MeasurementRecord r;
    std::string threads, rep, seconds;
    if (!std::getline(ss, r.paradigm, ',') || !std::getline(ss, r.problem, ',') ||
        !std::getline(ss, r.variant, ',') || !std::getline(ss, threads, ',') ||
        !std::getline(ss, rep, ',') || !std::getline(ss, seconds)) {
      throw ParseError(context + ":" + std::to_string(lineno) + ": expected 6 fields");
    }
    try {
      r.threads = std::stoul(threads);
      r.rep = std::stoul(rep);
      r.seconds = std::stod(seconds);
    } catch (const std::exception&) {
      throw ParseError(context + ":" + std::to_string(lineno) + ": malformed numeric field");
    }
    if (r.seconds <= 0)
      throw ParseError(context + ":" + std::to_string(lineno) + ": seconds must be positive");
    set.records.push_back(std::move(r));
  }
  return set;
}

void BenchSpec::validate() const {
  if (reps < 1) throw Error("bench spec: reps must be >= 1");
  if (thread_counts.empty()) throw Error("bench spec: thread counts must not be empty");
  for (std::size_t t : thread_counts) {
    if (t < 1) throw Error("bench spec: every thread count must be >= 1");
  }
  size.validate();
}

KernelInputs generate_input(Problem problem, const KernelParams& size) {
  size.validate();
  const ExecStrategy seq = ExecStrategy::sequential();
  KernelInputs in;
  switch (problem) {
    case Problem::Randmat:
    case Problem::Chain:
      break;  // parameters only
    case Problem::Thresh:
      in.matrix = randmat(size.nrows, size.ncols, size.seed, seq);
      break;
    case Problem::Winnow:
      in.matrix = randmat(size.nrows, size.ncols, size.seed, seq);
      in.mask = thresh(*in.matrix, size.percent, seq);
      break;
    case Problem::Outer: {
      const IntMatrix m = randmat(size.nrows, size.ncols, size.seed, seq);
      const Mask mask = thresh(m, size.percent, seq);
      in.points = winnow(m, mask, size.nelts, seq);
      break;
    }
    case Problem::Product: {
      const IntMatrix m = randmat(size.nrows, size.ncols, size.seed, seq);
      const Mask mask = thresh(m, size.percent, seq);
      const PointList pts = winnow(m, mask, size.nelts, seq);
      auto [dist, vec] = outer(pts, seq);
      in.real_matrix = std::move(dist);
      in.real_vector = std::move(vec);
      break;
    }
  }
  return in;
}

namespace {

std::string missing(Problem p, const char* what) {
  return std::string(problem_name(p)) + ": required input missing: " + what;
}

}  // namespace

KernelOutput run_kernel(Problem problem, const KernelInputs& inputs, const KernelParams& size,
                        const ExecStrategy& strategy) {
  KernelOutput out;
  switch (problem) {
    case Problem::Randmat:
      out.matrix = randmat(size.nrows, size.ncols, size.seed, strategy);
      break;
    case Problem::Thresh:
      if (!inputs.matrix) throw Error(missing(problem, "matrix"));
      out.mask = thresh(*inputs.matrix, size.percent, strategy);
      break;
    case Problem::Winnow:
      if (!inputs.matrix) throw Error(missing(problem, "matrix"));
      if (!inputs.mask) throw Error(missing(problem, "mask"));
      out.points = winnow(*inputs.matrix, *inputs.mask, size.nelts, strategy);
      break;
    case Problem::Outer: {
      if (!inputs.points) throw Error(missing(problem, "points"));
      auto [dist, vec] = outer(*inputs.points, strategy);
      out.real_matrix = std::move(dist);
      out.real_vector = std::move(vec);
      break;
    }
    case Problem::Product:
      if (!inputs.real_matrix) throw Error(missing(problem, "real matrix"));
      if (!inputs.real_vector) throw Error(missing(problem, "real vector"));
      out.real_vector = product(*inputs.real_matrix, *inputs.real_vector, strategy);
      break;
    case Problem::Chain:
      out.real_vector = chain(size.nelts, size.seed, size.percent, strategy);
      break;
  }
  return out;
}

double time_seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  const double s = std::chrono::duration<double>(t1 - t0).count();
  return s > 1e-9 ? s : 1e-9;
}

BenchResult run_benchmark(
    const BenchSpec& spec,
    const std::function<KernelInputs(Problem, const KernelParams&)>& inputs_for) {
  spec.validate();
  const auto make_inputs = inputs_for
                               ? inputs_for
                               : [](Problem p, const KernelParams& s) { return generate_input(p, s); };
  BenchResult result;
  const std::string paradigm =
      spec.paradigm.empty() ? strategy_name(spec.strategy.kind) : spec.paradigm;
  for (std::size_t threads : spec.thread_counts) {
    ExecStrategy strategy = spec.strategy;
    strategy.threads = threads;
    for (std::size_t w = 0; w < spec.warmups; ++w) {
      const KernelInputs inputs = make_inputs(spec.problem, spec.size);
      run_kernel(spec.problem, inputs, spec.size, strategy);
    }
    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
      const KernelInputs inputs = make_inputs(spec.problem, spec.size);
      KernelOutput output;
      double seconds = 0.0;
      try {
        seconds = time_seconds(
            [&] { output = run_kernel(spec.problem, inputs, spec.size, strategy); });
      } catch (const Error& e) {
        throw Error(std::string("benchmark aborted (problem=") + problem_name(spec.problem) +
                    ", threads=" + std::to_string(threads) + ", rep=" + std::to_string(rep) +
                    "): " + e.what());
      }
      result.measurements.records.push_back(
          {paradigm, problem_name(spec.problem), variant_name(spec.variant), threads, rep,
           seconds});
      result.last_output = std::move(output);
    }
  }
  return result;
}

}  // namespace cowichan
