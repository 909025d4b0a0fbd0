// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brain/bpel.hpp"
#include "brain/expr.hpp"
#include "brain/rules.hpp"

namespace brain {

/// Canned reaction of one provider operation: bindings merged into the
/// environment and a latency in logical ticks.
struct MockResponse {
  Env outputs;
  std::int64_t latency = 1;
  bool operator==(const MockResponse&) const = default;
};

struct MockEndpoint {
  std::string provider;
  std::map<std::string, MockResponse, std::less<>> operations;
  bool operator==(const MockEndpoint&) const = default;
};

using Mocks = std::map<std::string, MockEndpoint, std::less<>>;

/// <mocks><endpoint provider><operation name latency><output path type>v</output>...
Mocks load_mocks(std::string_view xml_text);
std::string serialize_mocks(const Mocks& mocks);

/// <env><var path type>v</var>...</env>
Env load_env(std::string_view xml_text);
std::string serialize_env(const Env& env);

enum class EventKind { task_start, task_end, rule_eval, fault_raised, branch_taken };
std::string_view event_kind_name(EventKind k) noexcept;

struct TraceEvent {
  std::int64_t tick = 0;
  EventKind kind = EventKind::task_start;
  std::string subject;
  /// rule_eval: "<ruleId> true|false"; branch_taken: then|else|none.
  std::string detail;
  bool operator==(const TraceEvent&) const = default;
};

enum class TraceStatus { completed, faulted };

struct ExecutionTrace {
  std::vector<TraceEvent> events;
  TraceStatus status = TraceStatus::completed;

  /// Subjects of the taskStart events, in order.
  std::vector<std::string> task_order() const;
  bool operator==(const ExecutionTrace&) const = default;
};

/// Runs an executable process. Sequences run in order; flows interleave
/// their branches one atomic step at a time, the branch chosen by a
/// mt19937_64 seeded with `seed` whenever more than one is ready. A task step
/// emits taskStart at the current tick and taskEnd after the mock latency.
/// Errors (checked before running): unbound_link, missing_mock.
ExecutionTrace execute(const BpelProcess& process, const Mocks& mocks, const Env& initial_env, std::uint64_t seed);

struct ScheduleOptions {
  std::size_t max_traces = 10000;
  std::size_t max_tasks = 8;
  /// Paths whose clock passes the bound are reported as too_large.
  std::optional<std::int64_t> tick_bound;
};

/// Every trace reachable under some scheduler, deduplicated, ordered by
/// their text form. Errors: too_large, plus those of execute.
std::vector<ExecutionTrace> enumerate_schedules(const BpelProcess& process, const Mocks& mocks,
                                                const Env& initial_env, const ScheduleOptions& options = {});

struct Violation {
  std::string rule_id;
  std::vector<std::size_t> positions;  // indexes into the trace
  std::vector<TraceEvent> evidence;
  bool operator==(const Violation&) const = default;
};

/// precedence(A,B): every taskStart(B) must follow some taskEnd(A); the
/// offending starts are the evidence. response(A,B), completed traces only:
/// every taskEnd(A) needs a later taskEnd(B). exclusive(A,B): A and B may not
/// both start. One violation per broken rule, rules in input order.
std::vector<Violation> check_conformance(const ExecutionTrace& trace, const std::vector<BehaviorRule>& rules);

/// Line-oriented export: "# status completed|faulted" then `tick kind subject [detail]`.
std::string trace_to_text(const ExecutionTrace& trace);
/// Throws Error(schema_violation) naming the offending line.
ExecutionTrace parse_trace_text(std::string_view text);

std::string format_violation(const Violation& v);

}  // namespace brain
