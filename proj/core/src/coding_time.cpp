#include "cowichan/coding_time.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cowichan/io.hpp"

namespace cowichan {

namespace {

std::optional<CommitKeyword> keyword_from_name(std::string_view name) {
  if (name == "start") return CommitKeyword::Start;
  if (name == "pause") return CommitKeyword::Pause;
  if (name == "resume") return CommitKeyword::Resume;
  if (name == "done") return CommitKeyword::Done;
  return std::nullopt;
}

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw MalformedLogError("commit log line " + std::to_string(line) + ": " + what);
}

// "YYYY-MM-DDTHH:MM:SS" with optional fractional seconds and optional
// Z / +HH:MM / -HH:MM zone designator.
double parse_iso8601(const std::string& s, std::size_t line) {
  int year, month, day, hour, minute;
  double second;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%lf%n", &year, &month, &day, &hour, &minute,
                  &second, &consumed) != 6) {
    malformed(line, "bad ISO8601 timestamp '" + s + "'");
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
      second < 0 || second >= 61) {
    malformed(line, "timestamp field out of range in '" + s + "'");
  }
  double offset_seconds = 0.0;
  std::string rest = s.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest != "Z") {
    int oh = 0, om = 0;
    char sign = rest[0];
    if ((sign != '+' && sign != '-') ||
        (std::sscanf(rest.c_str() + 1, "%2d:%2d", &oh, &om) != 2 &&
         std::sscanf(rest.c_str() + 1, "%2d%2d", &oh, &om) != 2)) {
      malformed(line, "bad timezone designator in '" + s + "'");
    }
    offset_seconds = (oh * 3600.0 + om * 60.0) * (sign == '-' ? -1.0 : 1.0);
  }
  const double days = static_cast<double>(days_from_civil(year, month, day));
  return days * 86400.0 + hour * 3600.0 + minute * 60.0 + second - offset_seconds;
}

}  // namespace

const char* keyword_name(CommitKeyword k) {
  switch (k) {
    case CommitKeyword::Start: return "start";
    case CommitKeyword::Pause: return "pause";
    case CommitKeyword::Resume: return "resume";
    case CommitKeyword::Done: return "done";
  }
  return "unknown";
}

std::vector<CommitEvent> parse_commit_log(std::istream& in) {
  std::vector<CommitEvent> events;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) malformed(lineno, "expected '<timestamp>\\t<message>'");
    CommitEvent ev;
    ev.line = lineno;
    ev.timestamp = parse_iso8601(line.substr(0, tab), lineno);
    ev.text = line.substr(tab + 1);

    const auto space = ev.text.find(' ');
    if (space == std::string::npos)
      malformed(lineno, "message '" + ev.text + "' lacks a keyword");
    const std::string tag = ev.text.substr(0, space);
    const std::string keyword = ev.text.substr(space + 1);

    // tag must be exactly language-problem-variant
    const auto h1 = tag.find('-');
    const auto h2 = tag.rfind('-');
    if (h1 == std::string::npos || h2 == h1 || tag.find('-', h1 + 1) != h2)
      malformed(lineno, "tag '" + tag + "' is not language-problem-variant");
    ev.language = tag.substr(0, h1);
    ev.problem = tag.substr(h1 + 1, h2 - h1 - 1);
    const std::string variant = tag.substr(h2 + 1);
    if (ev.language.empty()) malformed(lineno, "empty language in '" + tag + "'");
    if (!problem_from_name(ev.problem))
      malformed(lineno, "unknown problem '" + ev.problem + "'");
    const auto var = variant_from_name(variant);
    if (!var) malformed(lineno, "unknown variant '" + variant + "'");
    ev.variant = *var;
    const auto kw = keyword_from_name(keyword);
    if (!kw) malformed(lineno, "unknown keyword '" + keyword + "'");
    ev.keyword = *kw;
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<CodingTime> coding_time_from_log(const std::vector<CommitEvent>& events) {
  enum class State { Idle, Running, Paused, Finished };
  struct Stream {
    State state = State::Idle;
    double active_since = 0.0;
    double last_timestamp = 0.0;
    double total_seconds = 0.0;
    std::size_t last_line = 0;
    std::string last_text;
    std::size_t order = 0;  // first-appearance order, for stable output
  };
  std::map<std::tuple<std::string, std::string, Variant>, Stream> streams;

  for (const CommitEvent& ev : events) {
    auto key = std::make_tuple(ev.language, ev.problem, ev.variant);
    auto [it, inserted] = streams.try_emplace(key);
    Stream& st = it->second;
    if (inserted) st.order = streams.size() - 1;
    if (!inserted && ev.timestamp < st.last_timestamp) {
      malformed(ev.line, "event '" + ev.text + "' is out of timestamp order for its stream");
    }
    const auto bad = [&]() {
      malformed(ev.line, "invalid transition: '" + ev.text + "' (keyword " +
                             keyword_name(ev.keyword) + " in state " +
                             (st.state == State::Idle       ? "idle"
                              : st.state == State::Running  ? "running"
                              : st.state == State::Paused   ? "paused"
                                                            : "done") +
                             ")");
    };
    switch (ev.keyword) {
      case CommitKeyword::Start:
        if (st.state != State::Idle) bad();
        st.state = State::Running;
        st.active_since = ev.timestamp;
        break;
      case CommitKeyword::Pause:
        if (st.state != State::Running) bad();
        st.total_seconds += ev.timestamp - st.active_since;
        st.state = State::Paused;
        break;
      case CommitKeyword::Resume:
        if (st.state != State::Paused) bad();
        st.state = State::Running;
        st.active_since = ev.timestamp;
        break;
      case CommitKeyword::Done:
        if (st.state != State::Running) bad();
        st.total_seconds += ev.timestamp - st.active_since;
        st.state = State::Finished;
        break;
    }
    st.last_timestamp = ev.timestamp;
    st.last_line = ev.line;
    st.last_text = ev.text;
  }

  std::vector<CodingTime> result;
  std::vector<const decltype(streams)::value_type*> ordered;
  ordered.reserve(streams.size());
  for (const auto& kv : streams) ordered.push_back(&kv);
  std::sort(ordered.begin(), ordered.end(),
            [](auto* a, auto* b) { return a->second.order < b->second.order; });
  for (const auto* kv : ordered) {
    const Stream& st = kv->second;
    if (st.state != State::Finished) {
      malformed(st.last_line, "stream ends after '" + st.last_text + "' without done");
    }
    result.push_back({std::get<0>(kv->first), std::get<1>(kv->first), std::get<2>(kv->first),
                      st.total_seconds / 60.0});
  }
  return result;
}

CodingTimeTable cumulative_coding_time(const std::vector<CodingTime>& times) {
  CodingTimeTable table;
  for (const CodingTime& t : times) {
    table[{t.language, t.problem}][t.variant].raw_minutes = t.minutes;
  }
  for (auto& [key, cells] : table) {
    const auto raw = [&](Variant v) -> std::optional<double> {
      auto it = cells.find(v);
      if (it == cells.end()) return std::nullopt;
      return it->second.raw_minutes;
    };
    const auto seq = raw(Variant::Seq);
    const auto par = raw(Variant::Par);
    const auto eseq = raw(Variant::ExpertSeq);
    const auto epar = raw(Variant::ExpertPar);
    if (seq) cells[Variant::Seq].cumulative_minutes = *seq;
    if (seq && par) cells[Variant::Par].cumulative_minutes = *seq + *par;
    if (seq && eseq) cells[Variant::ExpertSeq].cumulative_minutes = *seq + *eseq;
    if (seq && par && epar)
      cells[Variant::ExpertPar].cumulative_minutes = *seq + *par + *epar;
  }
  return table;
}

void write_coding_time_csv(std::ostream& out, const CodingTimeTable& table) {
  out << "language,problem,variant,raw_minutes,cumulative_minutes\n";
  for (const auto& [key, cells] : table) {
    for (Variant v : all_variants()) {
      auto it = cells.find(v);
      if (it == cells.end()) {
        // absent variant, reported with empty fields rather than zeros
        out << key.first << ',' << key.second << ',' << variant_name(v) << ",,\n";
        continue;
      }
      const CodingTimeCell& cell = it->second;
      out << key.first << ',' << key.second << ',' << variant_name(v) << ',';
      if (cell.raw_minutes) out << format_real(*cell.raw_minutes);
      out << ',';
      if (cell.cumulative_minutes) out << format_real(*cell.cumulative_minutes);
      out << '\n';
    }
  }
}

}  // namespace cowichan
