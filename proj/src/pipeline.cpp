// SPDX-License-Identifier: Apache-2.0
#include "brain/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "brain/error.hpp"
#include "brain/io.hpp"

namespace brain {

namespace {

template <class T>
std::vector<T> of_kind(const RuleRepository& repo, RuleKind kind) {
  std::vector<T> out;
  for (auto& r : repo.query({kind, std::nullopt})) out.push_back(std::get<T>(std::move(r)));
  return out;
}

}  // namespace

Fixtures load_fixtures(const std::filesystem::path& dir) {
  Fixtures f;
  f.goals = load_goal_model(read_file(dir / "goals.xml"));
  f.rules = load_rule_directory(dir / "rules");
  f.registry = load_providers(read_file(dir / "providers.xml"));
  f.mocks = load_mocks(read_file(dir / "mocks.xml"));
  return f;
}

std::vector<BehaviorRule> behavior_rules(const RuleRepository& repo) {
  return of_kind<BehaviorRule>(repo, RuleKind::behavior);
}

std::vector<ConstraintRule> constraint_rules(const RuleRepository& repo) {
  return of_kind<ConstraintRule>(repo, RuleKind::constraint);
}

std::vector<DiscoveryRule> discovery_rules(const RuleRepository& repo) {
  return of_kind<DiscoveryRule>(repo, RuleKind::discovery);
}

Analysis analyze(const GoalModel& model, const RuleRepository& repo, const std::vector<std::string>& goal_ids) {
  Analysis a;
  a.selection = select_goals(model, goal_ids);
  std::set<std::string> selected;
  for (const auto& t : a.selection.tasks) selected.insert(t.id);
  for (auto& r : behavior_rules(repo)) {
    if (selected.contains(r.antecedent) && selected.contains(r.consequent)) a.behavior.push_back(std::move(r));
  }
  a.dependencies = build_dependency_graph(a.selection.tasks, a.selection.implied, a.behavior);
  return a;
}

namespace {

std::vector<ConstraintRule> selected_constraints(const Analysis& analysis, const RuleRepository& repo) {
  std::vector<ConstraintRule> out;
  for (auto& r : constraint_rules(repo)) {
    const auto& v = analysis.dependencies.vertices;
    if (std::find(v.begin(), v.end(), r.task) != v.end()) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

WorkflowGraph synthesize(const Analysis& analysis, const RuleRepository& repo) {
  return synthesize_workflow(analysis.dependencies, selected_constraints(analysis, repo));
}

std::vector<std::string> default_constraint_ids(const Analysis& analysis, const RuleRepository& repo) {
  const auto constraints = selected_constraints(analysis, repo);
  const auto guards = guard_rule_ids(analysis.dependencies, constraints);
  std::vector<std::string> out;
  for (const auto& r : constraints) {
    if (!guards.contains(r.id)) out.push_back(r.id);
  }
  return out;
}

WorkflowGraph apply_constraints(const WorkflowGraph& wf, const RuleRepository& repo,
                                const std::vector<std::string>& rule_ids) {
  std::vector<ConstraintRule> rules;
  for (const auto& id : rule_ids) {
    auto r = repo.get(id);
    if (!std::holds_alternative<ConstraintRule>(r)) throw Error(Errc::schema_violation, id, "not a constraint rule");
    rules.push_back(std::get<ConstraintRule>(std::move(r)));
  }
  return attach_constraints(wf, rules);
}

BpelProcess abstract_process(const WorkflowGraph& wf, const GoalModel& model, const std::string& name) {
  return graph_to_bpel(wf, model.tasks, name, model.requester);
}

std::vector<Provider> proposals(const BpelProcess& process, const std::string& link,
                                const std::vector<DiscoveryRule>& rules, const Registry& registry) {
  const auto* l = process.find_link(link);
  if (!l) throw Error(Errc::unknown_partner_link, link);
  std::set<std::string> tasks;
  std::function<void(const Activity&)> walk = [&](const Activity& a) {
    if (const auto* s = std::get_if<SequenceActivity>(&a.node)) {
      for (const auto& c : s->children) walk(c);
    } else if (const auto* f = std::get_if<FlowActivity>(&a.node)) {
      for (const auto& c : f->children) walk(c);
    } else if (const auto* i = std::get_if<IfActivity>(&a.node)) {
      walk(*i->then_branch);
      if (i->else_branch) walk(**i->else_branch);
    } else if (const auto* t = std::get_if<InvokeActivity>(&a.node)) {
      if (t->partner_link == link) tasks.insert(t->name);
    } else if (const auto* t = std::get_if<ReceiveActivity>(&a.node)) {
      if (t->partner_link == link) tasks.insert(t->name);
    } else if (const auto* t = std::get_if<ReplyActivity>(&a.node)) {
      if (t->partner_link == link) tasks.insert(t->name);
    }
  };
  walk(process.body);
  std::vector<Provider> out;
  for (const auto& p : registry.family(l->family)) {
    bool ok = true;
    for (const auto& r : rules) {
      if (!tasks.contains(r.task)) continue;
      if ((r.family && *r.family != p.family) || !eval_expr(r.predicate, p.attributes)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(p);
  }
  return out;
}

BpelProcess bind_with_defaults(const BpelProcess& process, const std::map<std::string, std::string>& chosen,
                               const std::vector<DiscoveryRule>& rules, const Registry& registry) {
  auto bindings = chosen;
  for (const auto& l : process.partner_links) {
    if (l.provider || bindings.contains(l.name)) continue;
    auto found = proposals(process, l.name, rules, registry);
    if (found.empty()) throw Error(Errc::no_provider_found, l.name);
    bindings.emplace(l.name, found.front().id);
  }
  return bind_partners(process, bindings, registry);
}

Simulation simulate(const BpelProcess& process, const Mocks& mocks, const Env& env, std::uint64_t seed,
                    const std::vector<BehaviorRule>& rules) {
  Simulation s;
  s.trace = execute(process, mocks, env, seed);
  s.violations = check_conformance(s.trace, rules);
  return s;
}

}  // namespace brain
