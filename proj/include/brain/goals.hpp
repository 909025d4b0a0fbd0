// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brain/xml.hpp"

namespace brain {

/// A unit of work performed by a participant (actor).
struct Task {
  std::string id;
  std::string name;
  std::string operation;
  std::vector<std::string> input_vars;
  std::vector<std::string> output_vars;
  std::string participant;

  bool operator==(const Task&) const = default;
};

/// Node of the goal hierarchy. Exactly one of children / task_refs is
/// non-empty. For an ordered goal the children (or, on a leaf, the task
/// references) form a sequence.
struct Goal {
  std::string id;
  std::string name;
  bool ordered = false;
  std::vector<Goal> children;
  std::vector<std::string> task_refs;

  bool operator==(const Goal&) const = default;
};

struct GoalModel {
  /// Actor that requests the process (the "Citizen" of a public-service
  /// process). Drives receive/reply inference during BPEL generation.
  std::optional<std::string> requester;
  std::vector<Task> tasks;
  Goal root;

  const Task* find_task(std::string_view id) const;
  const Goal* find_goal(std::string_view id) const;

  bool operator==(const GoalModel&) const = default;
};

using TaskPair = std::pair<std::string, std::string>;

struct Selection {
  std::vector<Task> tasks;           // document order of first occurrence
  std::vector<TaskPair> implied;     // (last of unit i, first of next selected unit)
};

/// Parses and validates a goal model; the first error in document order wins.
/// Errors: xml_syntax, schema_violation, dangling_task_ref, duplicate_goal_id,
/// duplicate_task_id, cyclic_goal (a goal re-using an ancestor's id).
GoalModel load_goal_model(std::string_view xml_text);
GoalModel goal_model_from_xml(const xml::Element& root);

/// Same checks as load_goal_model, for models built in memory.
void validate_goal_model(const GoalModel& model);

xml::Element goal_model_to_xml(const GoalModel& model);
std::string serialize_goal_model(const GoalModel& model);

/// Tasks under the selected goals plus the precedence pairs implied by
/// ordered goals. Errors: empty_selection, unknown_goal.
Selection select_goals(const GoalModel& model, const std::vector<std::string>& goal_ids);

}  // namespace brain
