// SPDX-License-Identifier: Apache-2.0
#include "brain/composer.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "brain/error.hpp"

namespace brain {

std::set<TaskPair> DependencyGraph::ordering() const {
  std::set<TaskPair> out = precedence;
  out.insert(response.begin(), response.end());
  return out;
}

namespace {

TaskPair unordered(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

/// Exclusive groups (connected components of the exclusive pairs) and the
/// ordering graph contracted over them.
struct Contraction {
  std::vector<std::string> vertices;
  std::map<std::string, std::size_t> index;
  std::vector<std::size_t> group;  // vertex index -> representative (smallest index)
  std::map<std::size_t, std::vector<std::size_t>> members;  // representative -> vertex indices
  std::map<std::size_t, std::set<std::size_t>> succ;        // over representatives
};

Contraction contract(const DependencyGraph& dep) {
  Contraction c;
  c.vertices = dep.vertices;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) c.index[c.vertices[i]] = i;
  std::vector<std::size_t> parent(c.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : dep.exclusive) {
    auto ra = find(c.index.at(a));
    auto rb = find(c.index.at(b));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  c.group.resize(c.vertices.size());
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    c.group[i] = find(i);
    c.members[c.group[i]].push_back(i);
  }
  for (const auto& [a, b] : dep.ordering()) {
    const auto ga = c.group[c.index.at(a)];
    const auto gb = c.group[c.index.at(b)];
    c.succ[ga].insert(gb);  // ga == gb is reported by the caller
  }
  return c;
}

void check_refs(const std::set<std::string>& known, const std::string& a, const std::string& b) {
  for (const auto* t : {&a, &b}) {
    if (!known.contains(*t)) throw Error(Errc::dangling_rule_ref, *t);
  }
}

void check_acyclic(const DependencyGraph& dep) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [a, b] : dep.ordering()) succ[a].push_back(b);
  enum class Color { white, gray, black };
  std::map<std::string, Color> color;
  std::vector<std::string> stack;

  // Recursive DFS; vertices and successors are visited in a fixed order so
  // the reported cycle is deterministic.
  std::function<void(const std::string&)> dfs = [&](const std::string& v) {
    color[v] = Color::gray;
    stack.push_back(v);
    for (const auto& w : succ[v]) {
      if (color[w] == Color::gray) {
        auto from = std::find(stack.begin(), stack.end(), w);
        std::vector<std::string> cycle(from, stack.end());
        cycle.push_back(w);
        throw Error(Errc::cyclic_rules, std::move(cycle));
      }
      if (color[w] == Color::white) dfs(w);
    }
    stack.pop_back();
    color[v] = Color::black;
  };
  for (const auto& v : dep.vertices) {
    if (color[v] == Color::white) dfs(v);
  }
}

void check_exclusive(const DependencyGraph& dep) {
  const auto ordering = dep.ordering();
  std::set<std::string> exclusive_tasks;
  for (const auto& [a, b] : dep.exclusive) {
    if (ordering.contains({a, b}) || ordering.contains({b, a})) {
      throw Error(Errc::exclusive_conflict, std::vector<std::string>{a, b}, "exclusive pair is also ordered");
    }
    exclusive_tasks.insert(a);
    exclusive_tasks.insert(b);
  }
  for (const auto& [a, b] : dep.precedence) {
    if (exclusive_tasks.contains(a)) {
      throw Error(Errc::exclusive_conflict, std::vector<std::string>{a, b},
                  "a task that may be skipped cannot precede another task");
    }
  }
  for (const auto& [a, b] : dep.response) {
    if (exclusive_tasks.contains(b)) {
      throw Error(Errc::exclusive_conflict, std::vector<std::string>{a, b},
                  "a task that may be skipped cannot be an obligation");
    }
  }

  const auto c = contract(dep);
  for (const auto& [g, next] : c.succ) {
    if (next.contains(g)) {
      std::vector<std::string> names;
      for (auto i : c.members.at(g)) names.push_back(c.vertices[i]);
      throw Error(Errc::exclusive_conflict, std::move(names), "exclusive group members are ordered");
    }
  }
  // Kahn over the contraction: leftovers are exclusive groups ordered
  // through a path leaving and re-entering the group.
  std::map<std::size_t, std::size_t> indeg;
  for (const auto& [g, m] : c.members) indeg[g] = 0;
  for (const auto& [g, next] : c.succ) {
    for (auto n : next) ++indeg[n];
  }
  std::deque<std::size_t> ready;
  for (const auto& [g, d] : indeg) {
    if (d == 0) ready.push_back(g);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto g = ready.front();
    ready.pop_front();
    ++seen;
    if (auto it = c.succ.find(g); it != c.succ.end()) {
      for (auto n : it->second) {
        if (--indeg[n] == 0) ready.push_back(n);
      }
    }
  }
  if (seen != indeg.size()) {
    for (const auto& [g, d] : indeg) {
      if (d != 0 && c.members.at(g).size() > 1) {
        std::vector<std::string> names;
        for (auto i : c.members.at(g)) names.push_back(c.vertices[i]);
        throw Error(Errc::exclusive_conflict, std::move(names), "exclusive group members are ordered transitively");
      }
    }
  }
}

// Level items: representative -> depth, grouped by depth, each item the
// group's member list in selection order.
std::vector<std::vector<std::vector<std::string>>> layered_items(const DependencyGraph& dep) {
  const auto c = contract(dep);
  std::map<std::size_t, std::size_t> indeg;
  for (const auto& [g, m] : c.members) indeg[g] = 0;
  for (const auto& [g, next] : c.succ) {
    for (auto n : next) ++indeg[n];
  }
  std::map<std::size_t, std::size_t> depth;
  std::deque<std::size_t> ready;
  for (const auto& [g, d] : indeg) {
    if (d == 0) ready.push_back(g);
  }
  while (!ready.empty()) {
    auto g = ready.front();
    ready.pop_front();
    if (auto it = c.succ.find(g); it != c.succ.end()) {
      for (auto n : it->second) {
        depth[n] = std::max(depth[n], depth[g] + 1);
        if (--indeg[n] == 0) ready.push_back(n);
      }
    }
  }
  std::size_t max_depth = 0;
  for (const auto& [g, d] : depth) max_depth = std::max(max_depth, d);
  std::vector<std::vector<std::vector<std::string>>> levels(c.members.empty() ? 0 : max_depth + 1);
  // Representatives iterate in index order, i.e. selection order.
  for (const auto& [g, m] : c.members) {
    std::vector<std::string> names;
    for (auto i : m) names.push_back(c.vertices[i]);
    levels[depth[g]].push_back(std::move(names));
  }
  return levels;
}

}  // namespace

void validate_dependency_graph(const DependencyGraph& dep) {
  std::set<std::string> known;
  for (const auto& v : dep.vertices) {
    if (!known.insert(v).second) throw Error(Errc::duplicate_task_id, v);
  }
  for (const auto* edges : {&dep.precedence, &dep.response, &dep.exclusive}) {
    for (const auto& [a, b] : *edges) {
      check_refs(known, a, b);
      if (a == b) throw Error(Errc::cyclic_rules, std::vector<std::string>{a, a});
    }
  }
  check_acyclic(dep);
  check_exclusive(dep);
}

DependencyGraph build_dependency_graph(const std::vector<std::string>& tasks,
                                       const std::vector<TaskPair>& implied,
                                       const std::vector<BehaviorRule>& rules) {
  DependencyGraph dep;
  dep.vertices = tasks;
  std::set<std::string> known(tasks.begin(), tasks.end());
  for (const auto& [a, b] : implied) {
    check_refs(known, a, b);
    dep.precedence.emplace(a, b);
  }
  for (const auto& r : rules) {
    check_refs(known, r.antecedent, r.consequent);
    switch (r.relation) {
      case BehaviorRelation::precedence: dep.precedence.emplace(r.antecedent, r.consequent); break;
      case BehaviorRelation::response: dep.response.emplace(r.antecedent, r.consequent); break;
      case BehaviorRelation::exclusive: dep.exclusive.insert(unordered(r.antecedent, r.consequent)); break;
    }
  }
  validate_dependency_graph(dep);
  return dep;
}

DependencyGraph build_dependency_graph(const std::vector<Task>& tasks,
                                       const std::vector<TaskPair>& implied,
                                       const std::vector<BehaviorRule>& rules) {
  std::vector<std::string> ids;
  ids.reserve(tasks.size());
  for (const auto& t : tasks) ids.push_back(t.id);
  return build_dependency_graph(ids, implied, rules);
}

std::vector<std::vector<std::string>> task_levels(const DependencyGraph& dep) {
  validate_dependency_graph(dep);
  std::vector<std::vector<std::string>> out;
  for (const auto& level : layered_items(dep)) {
    auto& names = out.emplace_back();
    for (const auto& item : level) names.insert(names.end(), item.begin(), item.end());
  }
  return out;
}

namespace {

std::map<std::string, const ConstraintRule*> guard_sources_by_task(const std::vector<ConstraintRule>& rules) {
  std::map<std::string, const ConstraintRule*> out;
  for (const auto& r : rules) {
    if (r.mode != ConstraintMode::pre) continue;
    auto& slot = out[r.task];
    if (!slot || r.id < slot->id) slot = &r;
  }
  return out;
}

}  // namespace

std::set<std::string> guard_rule_ids(const DependencyGraph& dep, const std::vector<ConstraintRule>& constraints) {
  const auto sources = guard_sources_by_task(constraints);
  std::set<std::string> out;
  for (const auto& [a, b] : dep.exclusive) {
    for (const auto* t : {&a, &b}) {
      if (auto it = sources.find(*t); it != sources.end()) out.insert(it->second->id);
    }
  }
  return out;
}

Fragment synthesize_fragment(const DependencyGraph& dep, const std::vector<ConstraintRule>& guard_sources) {
  validate_dependency_graph(dep);
  const PatternRepository patterns;
  const auto sources = guard_sources_by_task(guard_sources);
  auto missing_pair = [&](const std::string& task) {
    for (const auto& [a, b] : dep.exclusive) {
      if (a == task || b == task) return std::vector<std::string>{a, b};
    }
    return std::vector<std::string>{task};
  };

  std::vector<Fragment> levels;
  const auto layered = layered_items(dep);
  for (std::size_t k = 0; k < layered.size(); ++k) {
    const std::string level_prefix = "L" + std::to_string(k);
    std::vector<Fragment> items;
    std::size_t xor_count = 0;
    for (const auto& item : layered[k]) {
      if (item.size() == 1) {
        items.push_back(Fragment::task(item.front()));
        continue;
      }
      std::vector<std::optional<Guard>> guards;
      std::vector<Fragment> branches;
      for (const auto& task : item) {
        auto it = sources.find(task);
        if (it == sources.end()) throw Error(Errc::missing_guard, missing_pair(task));
        guards.emplace_back(Guard{it->second->id, it->second->condition});
        branches.push_back(Fragment::task(task));
      }
      items.push_back(patterns.xor_with(std::move(guards))
                          .instantiate(std::move(branches), level_prefix + ".xor" + std::to_string(xor_count++)));
    }
    if (items.size() == 1) {
      levels.push_back(std::move(items.front()));
    } else {
      levels.push_back(patterns.get(PatternKind::and_split_join).instantiate(std::move(items), level_prefix + ".and"));
    }
  }
  return patterns.get(PatternKind::sequence).instantiate(std::move(levels), "");
}

WorkflowGraph synthesize_workflow(const DependencyGraph& dep, const std::vector<ConstraintRule>& guard_sources) {
  return emit_workflow(synthesize_fragment(dep, guard_sources));
}

namespace {

Fragment normalize(Fragment f) {
  for (auto& c : f.children) c = normalize(std::move(c));
  if (f.kind == Fragment::Kind::sequence) return Fragment::sequence(std::move(f.children));
  return f;
}

bool locate(const Fragment& f, const std::string& task, std::vector<std::size_t>& path) {
  if (f.kind == Fragment::Kind::task && f.name == task) return true;
  for (std::size_t i = 0; i < f.children.size(); ++i) {
    path.push_back(i);
    if (locate(f.children[i], task, path)) return true;
    path.pop_back();
  }
  return false;
}

Fragment& at(Fragment& root, const std::vector<std::size_t>& path, std::size_t depth) {
  Fragment* f = &root;
  for (std::size_t i = 0; i < depth; ++i) f = &f->children[path[i]];
  return *f;
}

bool reaches(const WorkflowGraph& g, const std::string& from, const std::string& to) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [a, b] : g.edges) succ[a].push_back(b);
  std::set<std::string> seen{from};
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (id == to) return true;
    for (const auto& s : succ[id]) {
      if (seen.insert(s).second) stack.push_back(s);
    }
  }
  return false;
}

void attach_one(Fragment& tree, const ConstraintRule& rule) {
  std::vector<std::size_t> path;
  if (!locate(tree, rule.task, path)) throw Error(Errc::unknown_attached_task, rule.task, "rule " + rule.id);
  const bool reroute = rule.on_false.action == OnFalse::Action::reroute;
  const auto& target = rule.on_false.reroute_target;
  if (reroute) {
    std::vector<std::size_t> target_path;
    if (!locate(tree, target, target_path)) throw Error(Errc::unknown_reroute_target, target, "rule " + rule.id);
    if (reaches(emit_workflow(tree), target, rule.task)) throw Error(Errc::backward_reroute, target, "rule " + rule.id);
  }

  // The sequence holding the task; a task sitting directly in a branch or
  // at the root is wrapped in a one-element sequence first.
  Fragment* seq = nullptr;
  std::size_t idx = 0;
  if (!path.empty() && at(tree, path, path.size() - 1).kind == Fragment::Kind::sequence) {
    seq = &at(tree, path, path.size() - 1);
    idx = path.back();
  } else {
    Fragment& slot = at(tree, path, path.size());
    Fragment wrapper;
    wrapper.kind = Fragment::Kind::sequence;
    wrapper.children.push_back(std::move(slot));
    slot = std::move(wrapper);
    seq = &slot;
  }
  auto& items = seq->children;

  const Guard guard{rule.id, rule.condition};
  auto decision = [&](Fragment on_true, Fragment on_false) {
    std::vector<Fragment> branches;
    branches.push_back(std::move(on_true));
    branches.push_back(std::move(on_false));
    return Fragment::choice(rule.id + ".split", rule.id + ".join", std::move(branches), {guard, std::nullopt});
  };

  // Index of the reroute target among the later siblings.
  std::size_t target_idx = 0;
  if (reroute) {
    auto it = std::find_if(items.begin() + static_cast<std::ptrdiff_t>(idx) + 1, items.end(),
                           [&](const Fragment& f) { return f.kind == Fragment::Kind::task && f.name == target; });
    if (it == items.end()) throw Error(Errc::unstructured_reroute, target, "rule " + rule.id);
    target_idx = static_cast<std::size_t>(it - items.begin());
  }
  auto cut = [&](std::size_t from, std::size_t to) {
    std::vector<Fragment> part(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(from)),
                               std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(to)));
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(from), items.begin() + static_cast<std::ptrdiff_t>(to));
    return Fragment::sequence(std::move(part));
  };

  const auto pos = items.begin() + static_cast<std::ptrdiff_t>(idx);
  if (rule.mode == ConstraintMode::pre) {
    switch (rule.on_false.action) {
      case OnFalse::Action::fault: *pos = decision(std::move(*pos), Fragment::fault(rule.id + ".fault")); break;
      case OnFalse::Action::skip: *pos = decision(std::move(*pos), Fragment::empty()); break;
      case OnFalse::Action::reroute: {
        auto guarded = cut(idx, target_idx);
        items.insert(items.begin() + static_cast<std::ptrdiff_t>(idx), decision(std::move(guarded), Fragment::empty()));
        break;
      }
    }
  } else {
    switch (rule.on_false.action) {
      case OnFalse::Action::fault:
        items.insert(pos + 1, decision(Fragment::empty(), Fragment::fault(rule.id + ".fault")));
        break;
      case OnFalse::Action::skip:
        items.insert(pos + 1, decision(Fragment::empty(), Fragment::empty()));
        break;
      case OnFalse::Action::reroute: {
        auto guarded = cut(idx + 1, target_idx);
        items.insert(items.begin() + static_cast<std::ptrdiff_t>(idx) + 1,
                     decision(std::move(guarded), Fragment::empty()));
        break;
      }
    }
  }
}

}  // namespace

WorkflowGraph attach_constraints(const WorkflowGraph& wf, const std::vector<ConstraintRule>& rules) {
  if (rules.empty()) return wf;
  std::set<std::string> ids;
  for (const auto& r : rules) {
    if (!ids.insert(r.id).second) throw Error(Errc::duplicate_id, r.id);
    validate_rule(r);
  }
  Fragment tree = decompose_workflow(wf);
  for (const auto& r : rules) {
    attach_one(tree, r);
    tree = normalize(std::move(tree));
  }
  return emit_workflow(tree);
}

}  // namespace brain
