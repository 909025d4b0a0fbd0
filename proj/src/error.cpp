// SPDX-License-Identifier: Apache-2.0
#include "brain/error.hpp"

namespace brain {

std::string_view error_name(Errc code) noexcept {
  switch (code) {
    case Errc::xml_syntax: return "XmlSyntax";
    case Errc::schema_violation: return "SchemaViolation";
    case Errc::malformed_expr: return "MalformedExpr";
    case Errc::unknown_rule_kind: return "UnknownRuleKind";
    case Errc::missing_attribute: return "MissingAttribute";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::not_found: return "NotFound";
    case Errc::dangling_task_ref: return "DanglingTaskRef";
    case Errc::duplicate_goal_id: return "DuplicateGoalId";
    case Errc::duplicate_task_id: return "DuplicateTaskId";
    case Errc::cyclic_goal: return "CyclicGoal";
    case Errc::unknown_goal: return "UnknownGoal";
    case Errc::empty_selection: return "EmptySelection";
    case Errc::cyclic_rules: return "CyclicRules";
    case Errc::exclusive_conflict: return "ExclusiveConflict";
    case Errc::dangling_rule_ref: return "DanglingRuleRef";
    case Errc::missing_guard: return "MissingGuard";
    case Errc::unknown_attached_task: return "UnknownAttachedTask";
    case Errc::unknown_reroute_target: return "UnknownRerouteTarget";
    case Errc::backward_reroute: return "BackwardReroute";
    case Errc::unstructured_reroute: return "UnstructuredReroute";
    case Errc::invalid_workflow: return "InvalidWorkflow";
    case Errc::unresolved_task: return "UnresolvedTask";
    case Errc::family_mismatch: return "FamilyMismatch";
    case Errc::unbound_link: return "UnboundLink";
    case Errc::unknown_partner_link: return "UnknownPartnerLink";
    case Errc::unknown_provider: return "UnknownProvider";
    case Errc::duplicate_provider: return "DuplicateProvider";
    case Errc::no_provider_found: return "NoProviderFound";
    case Errc::missing_mock: return "MissingMock";
    case Errc::too_large: return "TooLarge";
  }
  return "Unknown";
}

namespace {

std::string format_what(Errc code, const std::vector<std::string>& subjects,
                        const std::string& message) {
  std::string out{error_name(code)};
  out += '(';
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (i != 0) out += ", ";
    out += subjects[i];
  }
  out += ')';
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace

Error::Error(Errc code, std::vector<std::string> subjects, std::string message)
    : std::runtime_error(format_what(code, subjects, message)),
      code_(code),
      subjects_(std::move(subjects)),
      message_(std::move(message)) {}

Error::Error(Errc code, std::string subject, std::string message)
    : Error(code, std::vector<std::string>{std::move(subject)}, std::move(message)) {}

}  // namespace brain
