// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brain/patterns.hpp"

namespace brain {

enum class NodeKind { task, and_split, and_join, xor_split, xor_join, fault };
std::string_view node_kind_name(NodeKind k) noexcept;

struct WorkflowNode {
  std::string id;  // task id for task nodes
  NodeKind kind = NodeKind::task;
  /// xor_split only: one entry per outgoing edge, in edge-list order;
  /// nullopt is the default branch.
  std::vector<std::optional<Guard>> guards;

  bool operator==(const WorkflowNode&) const = default;
};

using WorkflowEdge = std::pair<std::string, std::string>;

/// Abstract process model: task nodes and gateways, single entry and exit,
/// properly nested splits/joins, acyclic. Edge order is significant for the
/// out-edges of an XOR split (it aligns them with the guards); an XOR split
/// may have several edges to its join (empty branches).
struct WorkflowGraph {
  std::vector<WorkflowNode> nodes;
  std::vector<WorkflowEdge> edges;
  std::string entry;
  std::string exit;

  const WorkflowNode* find(std::string_view id) const;
  /// Task node ids in node-list order.
  std::vector<std::string> task_nodes() const;

  bool operator==(const WorkflowGraph&) const = default;
};

/// Lays a fragment out as a graph. Throws Error(invalid_workflow) for an
/// empty fragment, a loop (the graph is acyclic) or a duplicate node id.
WorkflowGraph emit_workflow(const Fragment& fragment);

/// Recovers the fragment tree. Throws Error(invalid_workflow) when the graph
/// is not a properly nested single-entry/single-exit graph.
Fragment decompose_workflow(const WorkflowGraph& graph);

/// All invariant violations of the graph; empty means valid.
std::vector<std::string> workflow_violations(const WorkflowGraph& graph);

}  // namespace brain
