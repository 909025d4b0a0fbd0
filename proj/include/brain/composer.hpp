// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "brain/goals.hpp"
#include "brain/rules.hpp"
#include "brain/workflow.hpp"

namespace brain {

/// Task dependencies derived from implied goal ordering and behavior rules.
struct DependencyGraph {
  std::vector<std::string> vertices;  // selection order
  std::set<TaskPair> precedence;
  std::set<TaskPair> response;
  std::set<TaskPair> exclusive;  // unordered, stored with first < second

  /// precedence ∪ response: the edges synthesis must respect.
  std::set<TaskPair> ordering() const;

  bool operator==(const DependencyGraph&) const = default;
};

/// Errors: dangling_rule_ref, cyclic_rules (subjects = cycle path, first
/// vertex repeated), exclusive_conflict.
///
/// An exclusive task may be skipped at run time, so it may not be the
/// antecedent of a precedence edge nor the consequent of a response edge,
/// and the members of an exclusive group may not be ordered (even
/// transitively) relative to each other.
DependencyGraph build_dependency_graph(const std::vector<std::string>& tasks,
                                       const std::vector<TaskPair>& implied,
                                       const std::vector<BehaviorRule>& rules);
DependencyGraph build_dependency_graph(const std::vector<Task>& tasks,
                                       const std::vector<TaskPair>& implied,
                                       const std::vector<BehaviorRule>& rules);

/// Re-checks the invariants build_dependency_graph establishes.
void validate_dependency_graph(const DependencyGraph& dep);

/// Longest-path levels over the ordering edges, exclusive groups contracted
/// to one vertex. Level k lists its task ids in selection order.
std::vector<std::vector<std::string>> task_levels(const DependencyGraph& dep);

/// Ids of the constraint rules that synthesis consumes as exclusive-branch
/// guards (first pre-mode rule by id per exclusive task).
std::set<std::string> guard_rule_ids(const DependencyGraph& dep,
                                     const std::vector<ConstraintRule>& constraints);

/// Level-layered synthesis: levels chained in sequence, several items in a
/// level run in an AND split/join, an exclusive group becomes an XOR
/// split/join whose branch guards come from pre-mode constraint rules.
/// Errors: missing_guard (subjects = the exclusive pair) plus the
/// validate_dependency_graph errors.
Fragment synthesize_fragment(const DependencyGraph& dep,
                             const std::vector<ConstraintRule>& guard_sources = {});
WorkflowGraph synthesize_workflow(const DependencyGraph& dep,
                                  const std::vector<ConstraintRule>& guard_sources = {});

/// Inserts one XOR decision point per rule, in list order. Errors:
/// unknown_attached_task, unknown_reroute_target, backward_reroute,
/// unstructured_reroute (target not later in the same sequence),
/// duplicate_id, invalid_workflow.
WorkflowGraph attach_constraints(const WorkflowGraph& wf, const std::vector<ConstraintRule>& rules);

}  // namespace brain
