// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "brain/expr.hpp"

namespace brain {

enum class RuleKind { behavior, constraint, discovery };
std::string_view rule_kind_name(RuleKind k) noexcept;
std::optional<RuleKind> parse_rule_kind(std::string_view name) noexcept;

enum class BehaviorRelation { precedence, response, exclusive };
std::string_view relation_name(BehaviorRelation r) noexcept;

/// Temporal constraint between two task events.
struct BehaviorRule {
  std::string id;
  BehaviorRelation relation = BehaviorRelation::precedence;
  std::string antecedent;
  std::string consequent;

  bool operator==(const BehaviorRule&) const = default;
};

enum class ConstraintMode { pre, post };
std::string_view mode_name(ConstraintMode m) noexcept;

struct OnFalse {
  enum class Action { fault, skip, reroute };
  Action action = Action::fault;
  std::string reroute_target;  // reroute only

  static OnFalse fault() { return {}; }
  static OnFalse skip() { return {Action::skip, {}}; }
  static OnFalse reroute(std::string target) { return {Action::reroute, std::move(target)}; }

  bool operator==(const OnFalse&) const = default;
};
std::string_view action_name(OnFalse::Action a) noexcept;

/// Condition tested at a task boundary; when false the on_false reaction runs.
struct ConstraintRule {
  std::string id;
  std::string task;
  ConstraintMode mode = ConstraintMode::pre;
  Expr condition = Expr::constant(true);
  OnFalse on_false;

  bool operator==(const ConstraintRule&) const = default;
};

/// Predicate over provider attributes selecting providers for a task.
struct DiscoveryRule {
  std::string id;
  std::string task;
  std::optional<std::string> family;
  Expr predicate = Expr::constant(true);

  bool operator==(const DiscoveryRule&) const = default;
};

using Rule = std::variant<BehaviorRule, ConstraintRule, DiscoveryRule>;

const std::string& rule_id(const Rule& r) noexcept;
RuleKind rule_kind(const Rule& r) noexcept;
/// Task ids the rule is indexed under: both ends of a behavior rule, the
/// attached task of a constraint, the task of a discovery rule.
std::vector<std::string> rule_tasks(const Rule& r);

/// Throws Error(schema_violation) when a rule breaks its type invariants.
void validate_rule(const Rule& r);

/// Parses a document holding exactly one <rule>.
Rule parse_rule(std::string_view xml_text);
/// Parses a single <rule> or a <rules> wrapper.
std::vector<Rule> parse_rules(std::string_view xml_text);

Rule rule_from_xml(const xml::Element& el);
xml::Element rule_to_xml(const Rule& r);

std::string serialize_rule(const Rule& r);
std::string serialize_rules(const std::vector<Rule>& rules);

}  // namespace brain
