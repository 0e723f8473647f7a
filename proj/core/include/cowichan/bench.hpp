#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cowichan/kernels.hpp"

namespace cowichan {

enum class Variant { Seq, Par, ExpertSeq, ExpertPar };

const char* variant_name(Variant v);  // seq, par, expert-seq, expert-par
/// Accepts both the canonical spellings and the hyphenless commit-message
/// forms (expertseq, expertpar).
std::optional<Variant> variant_from_name(std::string_view name);
const std::vector<Variant>& all_variants();

/// One timed sample. `paradigm` is the label compared across the study
/// (for in-repo campaigns, the strategy name).
struct MeasurementRecord {
  std::string paradigm;
  std::string problem;
  std::string variant;
  std::size_t threads = 1;
  std::size_t rep = 0;
  double seconds = 0.0;
};

struct MeasurementSet {
  std::vector<MeasurementRecord> records;
};

// Measurement CSV: header paradigm,problem,variant,threads,rep,seconds.
void write_measurements_csv(std::ostream& out, const MeasurementSet& set);
MeasurementSet read_measurements_csv(std::istream& in, const std::string& context = "measurements");

struct BenchSpec {
  Problem problem = Problem::Randmat;
  Variant variant = Variant::Par;
  ExecStrategy strategy;
  std::vector<std::size_t> thread_counts{1, 2, 4, 8};
  std::size_t reps = 30;
  std::size_t warmups = 2;
  KernelParams size;
  bool is_bench = true;
  std::string paradigm;  // empty -> strategy name

  void validate() const;
};

/// Inputs a kernel consumes. Which fields are set depends on the problem.
struct KernelInputs {
  std::optional<IntMatrix> matrix;
  std::optional<Mask> mask;
  std::optional<PointList> points;
  std::optional<RealMatrix> real_matrix;
  std::optional<RealVector> real_vector;
};

/// What a kernel produced; written to text files when is_bench is off.
struct KernelOutput {
  std::optional<IntMatrix> matrix;
  std::optional<Mask> mask;
  std::optional<PointList> points;
  std::optional<RealMatrix> real_matrix;
  std::optional<RealVector> real_vector;
};

/// Synthesizes a problem's inputs in memory, deterministically from
/// size.seed, by running the chain stages ahead of the problem with the
/// sequential strategy. No file I/O occurs. A winnow stage with too few
/// candidates fails here, before any timing starts.
KernelInputs generate_input(Problem problem, const KernelParams& size);

/// Runs one kernel over the given inputs. Missing inputs raise Error.
KernelOutput run_kernel(Problem problem, const KernelInputs& inputs, const KernelParams& size,
                        const ExecStrategy& strategy);

struct BenchResult {
  MeasurementSet measurements;
  KernelOutput last_output;  // output of the final timed run
};

/// Runs the campaign: for each thread count, `warmups` untimed runs then
/// `reps` timed runs. Each timed run constructs inputs, executes the kernel,
/// and records wall time excluding input construction and output emission.
/// `inputs_for` overrides input construction (the file-backed path when
/// is_bench is off); by default inputs come from generate_input.
BenchResult run_benchmark(
    const BenchSpec& spec,
    const std::function<KernelInputs(Problem, const KernelParams&)>& inputs_for = {});

/// Wall-clock seconds for one invocation, monotonic clock, never below 1 ns.
double time_seconds(const std::function<void()>& fn);

}  // namespace cowichan
