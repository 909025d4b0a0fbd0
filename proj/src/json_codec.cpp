// SPDX-License-Identifier: Apache-2.0
#include "brain/server/json_codec.hpp"

namespace brain::server {

namespace {

Json pairs(const std::set<TaskPair>& ps) {
  Json out = Json::array();
  for (const auto& [a, b] : ps) out.push_back({a, b});
  return out;
}

Json expr_json(const Expr& e) { return xml::write(expr_to_xml(e)); }

}  // namespace

Json to_json(const Scalar& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

Json to_json(const Env& env) {
  Json out = Json::object();
  for (const auto& [k, v] : env) out[k] = to_json(v);
  return out;
}

Env env_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::schema_violation, "env", "expected an object");
  Env env;
  for (const auto& [k, v] : j.items()) {
    if (v.is_boolean()) {
      env.emplace(k, v.get<bool>());
    } else if (v.is_number()) {
      env.emplace(k, v.get<double>());
    } else if (v.is_string()) {
      env.emplace(k, v.get<std::string>());
    } else {
      throw Error(Errc::schema_violation, "env/" + k, "expected a boolean, number or string");
    }
  }
  return env;
}

Json to_json(const Task& t) {
  return {{"id", t.id},
          {"name", t.name},
          {"operation", t.operation},
          {"participant", t.participant},
          {"inputs", t.input_vars},
          {"outputs", t.output_vars}};
}

Json to_json(const Goal& g) {
  Json children = Json::array();
  for (const auto& c : g.children) children.push_back(to_json(c));
  return {{"id", g.id}, {"name", g.name}, {"ordered", g.ordered}, {"children", children}, {"taskRefs", g.task_refs}};
}

Json to_json(const GoalModel& m) {
  Json tasks = Json::array();
  for (const auto& t : m.tasks) tasks.push_back(to_json(t));
  Json out = {{"tasks", tasks}, {"root", to_json(m.root)}};
  out["requester"] = m.requester ? Json(*m.requester) : Json(nullptr);
  return out;
}

Json to_json(const Rule& r) {
  Json out = {{"id", rule_id(r)}, {"kind", rule_kind_name(rule_kind(r))}, {"xml", serialize_rule(r)}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BehaviorRule>) {
          out["relation"] = relation_name(x.relation);
          out["antecedent"] = x.antecedent;
          out["consequent"] = x.consequent;
        } else if constexpr (std::is_same_v<T, ConstraintRule>) {
          out["task"] = x.task;
          out["mode"] = mode_name(x.mode);
          out["onFalse"] = action_name(x.on_false.action);
          if (x.on_false.action == OnFalse::Action::reroute) out["rerouteTarget"] = x.on_false.reroute_target;
        } else {
          out["task"] = x.task;
          out["family"] = x.family ? Json(*x.family) : Json(nullptr);
        }
      },
      r);
  return out;
}

Json to_json(const DependencyGraph& d) {
  return {{"vertices", d.vertices},
          {"precedence", pairs(d.precedence)},
          {"response", pairs(d.response)},
          {"exclusive", pairs(d.exclusive)}};
}

Json to_json(const Analysis& a) {
  Json tasks = Json::array();
  for (const auto& t : a.selection.tasks) tasks.push_back(to_json(t));
  Json implied = Json::array();
  for (const auto& [x, y] : a.selection.implied) implied.push_back({x, y});
  Json rules = Json::array();
  for (const auto& r : a.behavior) rules.push_back(to_json(Rule(r)));
  return {{"tasks", tasks}, {"implied", implied}, {"rules", rules}, {"dependencies", to_json(a.dependencies)}};
}

Json to_json(const WorkflowGraph& wf) {
  Json nodes = Json::array();
  for (const auto& n : wf.nodes) {
    Json node = {{"id", n.id}, {"kind", node_kind_name(n.kind)}};
    if (n.kind == NodeKind::xor_split) {
      Json guards = Json::array();
      for (const auto& g : n.guards) {
        guards.push_back(g ? Json{{"rule", g->rule}, {"condition", expr_json(g->condition)}} : Json(nullptr));
      }
      node["guards"] = guards;
    }
    nodes.push_back(node);
  }
  Json edges = Json::array();
  for (const auto& [a, b] : wf.edges) edges.push_back({a, b});
  return {{"entry", wf.entry}, {"exit", wf.exit}, {"nodes", nodes}, {"edges", edges}};
}

Json to_json(const Provider& p) {
  return {{"id", p.id}, {"family", p.family}, {"endpoint", p.endpoint}, {"attributes", to_json(p.attributes)}};
}

Json to_json(const TraceEvent& e) {
  return {{"tick", e.tick}, {"kind", event_kind_name(e.kind)}, {"subject", e.subject}, {"detail", e.detail}};
}

Json to_json(const ExecutionTrace& t) {
  Json events = Json::array();
  for (const auto& e : t.events) events.push_back(to_json(e));
  return {{"status", t.status == TraceStatus::completed ? "completed" : "faulted"},
          {"events", events},
          {"text", trace_to_text(t)}};
}

Json to_json(const Violation& v) {
  Json evidence = Json::array();
  for (std::size_t i = 0; i < v.evidence.size(); ++i) {
    auto e = to_json(v.evidence[i]);
    e["position"] = v.positions[i];
    evidence.push_back(e);
  }
  return {{"ruleId", v.rule_id}, {"evidence", evidence}};
}

Json to_json(const Simulation& s) {
  Json violations = Json::array();
  for (const auto& v : s.violations) violations.push_back(to_json(v));
  return {{"trace", to_json(s.trace)}, {"violations", violations}, {"conformant", s.violations.empty()}};
}

Json error_json(const Error& e) {
  return {{"error", e.name()}, {"message", e.message()}, {"subjects", e.subjects()}};
}

Json error_json(std::string_view name, std::string_view message) {
  return {{"error", name}, {"message", message}, {"subjects", Json::array()}};
}

}  // namespace brain::server
