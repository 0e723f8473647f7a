#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cowichan/bench.hpp"

namespace cowichan {

enum class CommitKeyword { Start, Pause, Resume, Done };

const char* keyword_name(CommitKeyword k);

/// One commit-log event. Commit messages follow the form
/// "language-problem-variant keyword" with variant in {seq, par, expertseq,
/// expertpar} and keyword in {start, pause, resume, done}; each log line is
/// "ISO8601-timestamp<TAB>message".
struct CommitEvent {
  double timestamp = 0.0;  // seconds since the epoch, UTC
  std::string language;
  std::string problem;
  Variant variant = Variant::Seq;
  CommitKeyword keyword = CommitKeyword::Start;
  std::size_t line = 0;    // log line, for diagnostics
  std::string text;        // original message, for diagnostics
};

std::vector<CommitEvent> parse_commit_log(std::istream& in);

struct CodingTime {
  std::string language;
  std::string problem;
  Variant variant = Variant::Seq;
  double minutes = 0.0;
};

/// Sums active intervals (start->pause, resume->pause, start/resume->done)
/// per (language, problem, variant) stream. Transitions outside
/// start->{pause,done}, pause->{resume}, resume->{pause,done} raise
/// MalformedLogError naming the offending event, as does a stream that never
/// reaches done.
std::vector<CodingTime> coding_time_from_log(const std::vector<CommitEvent>& events);

struct CodingTimeCell {
  std::optional<double> raw_minutes;
  std::optional<double> cumulative_minutes;
};

/// (language, problem) -> variant -> cell.
using CodingTimeTable = std::map<std::pair<std::string, std::string>, std::map<Variant, CodingTimeCell>>;

/// Cumulative semantics: par includes seq; expert-seq = seq + its increment;
/// expert-par = par (cumulative) + its increment. Cells whose bases are
/// missing stay absent rather than defaulting to zero.
CodingTimeTable cumulative_coding_time(const std::vector<CodingTime>& times);

/// CSV: language,problem,variant,raw_minutes,cumulative_minutes (absent
/// cells left empty).
void write_coding_time_csv(std::ostream& out, const CodingTimeTable& table);

}  // namespace cowichan
