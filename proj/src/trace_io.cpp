// SPDX-License-Identifier: Apache-2.0
#include <charconv>

#include "brain/error.hpp"
#include "brain/runtime.hpp"

namespace brain {

namespace {

std::string event_line(const TraceEvent& e) {
  std::string line = std::to_string(e.tick);
  line += ' ';
  line += event_kind_name(e.kind);
  line += ' ';
  line += e.subject;
  if (!e.detail.empty()) {
    line += ' ';
    line += e.detail;
  }
  return line;
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (auto k : {EventKind::task_start, EventKind::task_end, EventKind::rule_eval, EventKind::fault_raised,
                 EventKind::branch_taken}) {
    if (event_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view next_field(std::string_view& rest) {
  const auto pos = rest.find(' ');
  auto field = rest.substr(0, pos);
  rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
  return field;
}

}  // namespace

std::string trace_to_text(const ExecutionTrace& trace) {
  std::string out = trace.status == TraceStatus::completed ? "# status completed\n" : "# status faulted\n";
  for (const auto& e : trace.events) {
    out += event_line(e);
    out += '\n';
  }
  return out;
}

ExecutionTrace parse_trace_text(std::string_view text) {
  ExecutionTrace trace;
  bool header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto where = "line " + std::to_string(line_no);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line == "# status completed") {
        trace.status = TraceStatus::completed;
      } else if (line == "# status faulted") {
        trace.status = TraceStatus::faulted;
      } else {
        throw Error(Errc::schema_violation, where, "unknown header");
      }
      if (header || !trace.events.empty()) throw Error(Errc::schema_violation, where, "misplaced header");
      header = true;
      continue;
    }
    auto rest = line;
    const auto tick_text = next_field(rest);
    const auto kind_text = next_field(rest);
    const auto subject = next_field(rest);
    TraceEvent e;
    auto [ptr, ec] = std::from_chars(tick_text.data(), tick_text.data() + tick_text.size(), e.tick);
    if (ec != std::errc{} || ptr != tick_text.data() + tick_text.size()) {
      throw Error(Errc::schema_violation, where, "bad tick");
    }
    auto kind = parse_event_kind(kind_text);
    if (!kind) throw Error(Errc::schema_violation, where, "unknown event kind '" + std::string(kind_text) + "'");
    if (subject.empty()) throw Error(Errc::schema_violation, where, "missing subject");
    e.kind = *kind;
    e.subject = subject;
    e.detail = rest;
    trace.events.push_back(std::move(e));
  }
  if (!header && !trace.events.empty()) {
    // Without a header a trailing faultRaised marks the trace as faulted.
    if (trace.events.back().kind == EventKind::fault_raised) trace.status = TraceStatus::faulted;
  }
  return trace;
}

std::string format_violation(const Violation& v) {
  std::string out = v.rule_id + ":";
  for (std::size_t i = 0; i < v.evidence.size(); ++i) {
    out += " [" + std::to_string(v.positions[i]) + "] " + event_line(v.evidence[i]);
    if (i + 1 < v.evidence.size()) out += ';';
  }
  return out;
}

}  // namespace brain
