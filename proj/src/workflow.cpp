// SPDX-License-Identifier: Apache-2.0
#include "brain/workflow.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "brain/error.hpp"

namespace brain {

std::string_view node_kind_name(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::task: return "TASK";
    case NodeKind::and_split: return "AND_SPLIT";
    case NodeKind::and_join: return "AND_JOIN";
    case NodeKind::xor_split: return "XOR_SPLIT";
    case NodeKind::xor_join: return "XOR_JOIN";
    case NodeKind::fault: return "FAULT";
  }
  return "TASK";
}

const WorkflowNode* WorkflowGraph::find(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

std::vector<std::string> WorkflowGraph::task_nodes() const {
  std::vector<std::string> out;
  for (const auto& n : nodes) {
    if (n.kind == NodeKind::task) out.push_back(n.id);
  }
  return out;
}

namespace {

bool is_split(NodeKind k) { return k == NodeKind::and_split || k == NodeKind::xor_split; }
bool is_join(NodeKind k) { return k == NodeKind::and_join || k == NodeKind::xor_join; }

class Emitter {
 public:
  WorkflowGraph graph;

  // Returns (entry, exit) of the emitted part, nullopt for an empty fragment.
  std::optional<std::pair<std::string, std::string>> emit(const Fragment& f) {
    using K = Fragment::Kind;
    switch (f.kind) {
      case K::empty: return std::nullopt;
      case K::task: add_node({f.name, NodeKind::task, {}}); return std::pair{f.name, f.name};
      case K::fault: add_node({f.name, NodeKind::fault, {}}); return std::pair{f.name, f.name};
      case K::sequence: {
        std::optional<std::pair<std::string, std::string>> whole;
        for (const auto& c : f.children) {
          auto part = emit(c);
          if (!part) continue;
          if (whole) {
            graph.edges.emplace_back(whole->second, part->first);
            whole->second = part->second;
          } else {
            whole = part;
          }
        }
        return whole;
      }
      case K::parallel:
      case K::choice: {
        const bool exclusive = f.kind == K::choice;
        if (f.children.size() < 2) {
          throw Error(Errc::invalid_workflow, f.split_id, "split needs at least two branches");
        }
        if (exclusive && f.guards.size() != f.children.size()) {
          throw Error(Errc::invalid_workflow, f.split_id, "guard count does not match branches");
        }
        add_node({f.split_id, exclusive ? NodeKind::xor_split : NodeKind::and_split,
                  exclusive ? f.guards : std::vector<std::optional<Guard>>{}});
        std::vector<std::optional<std::pair<std::string, std::string>>> branches;
        for (const auto& c : f.children) {
          // The split's out-edge must precede the branch's own edges only
          // relative to the split's other out-edges, so emit it first.
          const auto edge_slot = graph.edges.size();
          graph.edges.emplace_back(f.split_id, std::string{});
          auto part = emit(c);
          graph.edges[edge_slot].second = part ? part->first : f.join_id;
          branches.push_back(std::move(part));
        }
        add_node({f.join_id, exclusive ? NodeKind::xor_join : NodeKind::and_join, {}});
        for (const auto& b : branches) {
          if (b) graph.edges.emplace_back(b->second, f.join_id);
        }
        return std::pair{f.split_id, f.join_id};
      }
      case K::loop:
        throw Error(Errc::invalid_workflow, f.split_id, "a loop cannot be laid out in an acyclic graph");
    }
    return std::nullopt;
  }

 private:
  void add_node(WorkflowNode n) {
    if (!ids_.insert(n.id).second) throw Error(Errc::invalid_workflow, n.id, "duplicate node id");
    if (n.id.empty()) throw Error(Errc::invalid_workflow, "node", "empty node id");
    graph.nodes.push_back(std::move(n));
  }
  std::set<std::string> ids_;
};

}  // namespace

WorkflowGraph emit_workflow(const Fragment& fragment) {
  Emitter e;
  auto ends = e.emit(fragment);
  if (!ends) throw Error(Errc::invalid_workflow, "workflow", "no nodes");
  e.graph.entry = ends->first;
  e.graph.exit = ends->second;
  return std::move(e.graph);
}

namespace {

class Decomposer {
 public:
  explicit Decomposer(const WorkflowGraph& g) : g_(g) {
    for (const auto& n : g.nodes) {
      if (!nodes_.emplace(n.id, &n).second) fail(n.id, "duplicate node id");
    }
    for (const auto& [from, to] : g.edges) {
      if (!nodes_.contains(from) || !nodes_.contains(to)) fail(from + "->" + to, "edge to unknown node");
      out_[from].push_back(to);
      ++in_degree_[to];
    }
  }

  Fragment run() {
    if (!nodes_.contains(g_.entry)) fail(g_.entry, "unknown entry");
    if (in_degree_[g_.entry] != 0) fail(g_.entry, "entry has incoming edges");
    auto [parts, stop] = chain(g_.entry);
    if (!stop.empty()) fail(stop, "join without matching split");
    if (visited_.size() != nodes_.size()) fail("workflow", "nodes unreachable from the entry");
    if (last_ != g_.exit) fail(g_.exit, "exit is not the final node");
    return Fragment::sequence(std::move(parts));
  }

 private:
  [[noreturn]] static void fail(const std::string& subject, const std::string& message) {
    throw Error(Errc::invalid_workflow, subject, message);
  }

  const WorkflowNode& node(const std::string& id) const { return *nodes_.at(id); }

  const std::vector<std::string>& outs(const std::string& id) {
    static const std::vector<std::string> none;
    auto it = out_.find(id);
    return it == out_.end() ? none : it->second;
  }

  void visit(const std::string& id) {
    if (!visited_.insert(id).second) fail(id, "node reached twice (not properly nested or cyclic)");
    last_ = id;
  }

  // Parses a chain starting at `id` until a join (returned, not consumed) or
  // the exit (empty string).
  std::pair<std::vector<Fragment>, std::string> chain(std::string id) {
    std::vector<Fragment> parts;
    while (true) {
      const auto& n = node(id);
      if (is_join(n.kind)) return {std::move(parts), id};
      visit(id);
      std::string next_from = id;
      if (n.kind == NodeKind::task || n.kind == NodeKind::fault) {
        if (!n.guards.empty()) fail(id, "guards on a non-split node");
        parts.push_back(n.kind == NodeKind::task ? Fragment::task(id) : Fragment::fault(id));
      } else {
        const bool exclusive = n.kind == NodeKind::xor_split;
        const auto& targets = outs(id);
        if (targets.size() < 2) fail(id, "split with fewer than two branches");
        if (exclusive && n.guards.size() != targets.size()) fail(id, "guard count does not match branches");
        if (!exclusive && !n.guards.empty()) fail(id, "guards on an AND split");
        std::vector<Fragment> branches;
        std::string join;
        for (const auto& t : targets) {
          std::string reached;
          if (is_join(node(t).kind)) {
            branches.push_back(Fragment::empty());
            reached = t;
          } else {
            auto [b, stop] = chain(t);
            if (stop.empty()) fail(id, "branch reaches the exit without joining");
            branches.push_back(Fragment::sequence(std::move(b)));
            reached = stop;
          }
          if (join.empty()) join = reached;
          if (reached != join) fail(id, "branches join at different nodes");
        }
        const auto join_kind = node(join).kind;
        if ((exclusive && join_kind != NodeKind::xor_join) || (!exclusive && join_kind != NodeKind::and_join)) {
          fail(join, "join kind does not match split " + id);
        }
        if (in_degree_[join] != static_cast<int>(targets.size())) fail(join, "join has foreign incoming edges");
        visit(join);
        parts.push_back(exclusive ? Fragment::choice(id, join, std::move(branches), n.guards)
                                  : Fragment::parallel(id, join, std::move(branches)));
        next_from = join;
      }
      const auto& next = outs(next_from);
      if (next.empty()) return {std::move(parts), {}};
      if (next.size() > 1) fail(next_from, "non-split node with several successors");
      id = next.front();
    }
  }

  const WorkflowGraph& g_;
  std::map<std::string, const WorkflowNode*> nodes_;
  std::map<std::string, std::vector<std::string>> out_;
  std::map<std::string, int> in_degree_;
  std::set<std::string> visited_;
  std::string last_;
};

}  // namespace

Fragment decompose_workflow(const WorkflowGraph& graph) { return Decomposer(graph).run(); }

std::vector<std::string> workflow_violations(const WorkflowGraph& g) {
  std::vector<std::string> out;
  std::map<std::string, const WorkflowNode*> nodes;
  for (const auto& n : g.nodes) {
    if (!nodes.emplace(n.id, &n).second) out.push_back("duplicate node id " + n.id);
  }
  std::map<std::string, std::vector<std::string>> succ, pred;
  for (const auto& [a, b] : g.edges) {
    if (!nodes.contains(a) || !nodes.contains(b)) {
      out.push_back("edge " + a + "->" + b + " references an unknown node");
      continue;
    }
    if (a == b) out.push_back("self loop on " + a);
    succ[a].push_back(b);
    pred[b].push_back(a);
  }
  if (!out.empty()) return out;

  std::vector<std::string> sources, sinks;
  for (const auto& n : g.nodes) {
    if (pred[n.id].empty()) sources.push_back(n.id);
    if (succ[n.id].empty()) sinks.push_back(n.id);
  }
  if (sources.size() != 1 || sources.front() != g.entry) out.push_back("entry is not the unique source");
  if (sinks.size() != 1 || sinks.front() != g.exit) out.push_back("exit is not the unique sink");

  // Kahn's algorithm; leftovers mean a cycle.
  std::map<std::string, std::size_t> indeg;
  for (const auto& n : g.nodes) indeg[n.id] = pred[n.id].size();
  std::deque<std::string> ready;
  for (const auto& [id, d] : indeg) {
    if (d == 0) ready.push_back(id);
  }
  std::size_t ordered = 0;
  while (!ready.empty()) {
    auto id = ready.front();
    ready.pop_front();
    ++ordered;
    for (const auto& s : succ[id]) {
      if (--indeg[s] == 0) ready.push_back(s);
    }
  }
  if (ordered != g.nodes.size()) out.push_back("graph has a cycle");

  auto reach = [&](const std::string& start, auto& adjacency) {
    std::set<std::string> seen{start};
    std::vector<std::string> stack{start};
    while (!stack.empty()) {
      auto id = stack.back();
      stack.pop_back();
      for (const auto& s : adjacency[id]) {
        if (seen.insert(s).second) stack.push_back(s);
      }
    }
    return seen;
  };
  if (nodes.contains(g.entry) && nodes.contains(g.exit)) {
    const auto fwd = reach(g.entry, succ);
    const auto bwd = reach(g.exit, pred);
    for (const auto& n : g.nodes) {
      if (!fwd.contains(n.id) || !bwd.contains(n.id)) out.push_back(n.id + " is not on an entry-exit path");
    }
  }

  for (const auto& n : g.nodes) {
    const auto in = pred[n.id].size();
    const auto outd = succ[n.id].size();
    if (is_split(n.kind)) {
      if (in > 1 || outd < 2) out.push_back(std::string(node_kind_name(n.kind)) + " " + n.id + " has wrong degree");
    } else if (is_join(n.kind)) {
      if (in < 2 || outd > 1) out.push_back(std::string(node_kind_name(n.kind)) + " " + n.id + " has wrong degree");
    } else if (in > 1 || outd > 1) {
      out.push_back(n.id + " has wrong degree");
    }
    if (n.kind == NodeKind::xor_split) {
      if (n.guards.size() != outd) out.push_back(n.id + " guard count does not match branches");
      for (std::size_t i = 0; i + 1 < n.guards.size(); ++i) {
        if (!n.guards[i]) out.push_back(n.id + " default branch is not last");
      }
    } else if (!n.guards.empty()) {
      out.push_back(n.id + " carries guards but is not an XOR split");
    }
  }
  if (!out.empty()) return out;

  try {
    decompose_workflow(g);
  } catch (const Error& e) {
    out.push_back(std::string("not properly nested: ") + e.what());
  }
  return out;
}

}  // namespace brain
