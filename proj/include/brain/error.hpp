// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brain {

/// Domain error codes. The string form (see error_name) is what crosses the
/// HTTP and CLI boundaries, so renaming an enumerator is a wire change.
enum class Errc {
  xml_syntax,
  schema_violation,
  malformed_expr,
  unknown_rule_kind,
  missing_attribute,
  duplicate_id,
  not_found,
  dangling_task_ref,
  duplicate_goal_id,
  duplicate_task_id,
  cyclic_goal,
  unknown_goal,
  empty_selection,
  cyclic_rules,
  exclusive_conflict,
  dangling_rule_ref,
  missing_guard,
  unknown_attached_task,
  unknown_reroute_target,
  backward_reroute,
  unstructured_reroute,
  invalid_workflow,
  unresolved_task,
  family_mismatch,
  unbound_link,
  unknown_partner_link,
  unknown_provider,
  duplicate_provider,
  no_provider_found,
  missing_mock,
  too_large,
};

std::string_view error_name(Errc code) noexcept;

/// Exception carrying a domain error code plus the offending subjects
/// (ids, a cycle path, an XPath-like location, ...).
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::vector<std::string> subjects, std::string message = {});
  Error(Errc code, std::string subject, std::string message = {});

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  const std::vector<std::string>& subjects() const noexcept { return subjects_; }
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::vector<std::string> subjects_;
  std::string message_;
};

}  // namespace brain
