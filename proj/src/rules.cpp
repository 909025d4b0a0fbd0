// SPDX-License-Identifier: Apache-2.0
#include "brain/rules.hpp"

#include <algorithm>
#include <initializer_list>

#include "brain/error.hpp"

namespace brain {

std::string_view rule_kind_name(RuleKind k) noexcept {
  switch (k) {
    case RuleKind::behavior: return "behavior";
    case RuleKind::constraint: return "constraint";
    case RuleKind::discovery: return "discovery";
  }
  return "behavior";
}

std::optional<RuleKind> parse_rule_kind(std::string_view name) noexcept {
  for (auto k : {RuleKind::behavior, RuleKind::constraint, RuleKind::discovery}) {
    if (rule_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view relation_name(BehaviorRelation r) noexcept {
  switch (r) {
    case BehaviorRelation::precedence: return "precedence";
    case BehaviorRelation::response: return "response";
    case BehaviorRelation::exclusive: return "exclusive";
  }
  return "precedence";
}

std::string_view mode_name(ConstraintMode m) noexcept {
  return m == ConstraintMode::pre ? "pre" : "post";
}

std::string_view action_name(OnFalse::Action a) noexcept {
  switch (a) {
    case OnFalse::Action::fault: return "fault";
    case OnFalse::Action::skip: return "skip";
    case OnFalse::Action::reroute: return "reroute";
  }
  return "fault";
}

const std::string& rule_id(const Rule& r) noexcept {
  return std::visit([](const auto& x) -> const std::string& { return x.id; }, r);
}

RuleKind rule_kind(const Rule& r) noexcept { return static_cast<RuleKind>(r.index()); }

std::vector<std::string> rule_tasks(const Rule& r) {
  if (const auto* b = std::get_if<BehaviorRule>(&r)) return {b->antecedent, b->consequent};
  if (const auto* c = std::get_if<ConstraintRule>(&r)) return {c->task};
  return {std::get<DiscoveryRule>(r).task};
}

namespace {

void require_condition(const Expr& e, const std::string& rule) {
  if (e.kind() == Expr::Kind::constant && kind_of(e.value()) != ScalarKind::boolean) {
    throw Error(Errc::malformed_expr, rule, "condition is a non-boolean constant");
  }
}

}  // namespace

void validate_rule(const Rule& r) {
  const auto& id = rule_id(r);
  if (id.empty()) throw Error(Errc::schema_violation, "rule", "empty id");
  if (const auto* b = std::get_if<BehaviorRule>(&r)) {
    if (b->antecedent.empty() || b->consequent.empty()) {
      throw Error(Errc::schema_violation, id, "empty task reference");
    }
    if (b->antecedent == b->consequent) {
      throw Error(Errc::schema_violation, id, "antecedent equals consequent");
    }
  } else if (const auto* c = std::get_if<ConstraintRule>(&r)) {
    if (c->task.empty()) throw Error(Errc::schema_violation, id, "empty task reference");
    const bool reroute = c->on_false.action == OnFalse::Action::reroute;
    if (reroute && c->on_false.reroute_target.empty()) {
      throw Error(Errc::schema_violation, id, "reroute without target");
    }
    if (!reroute && !c->on_false.reroute_target.empty()) {
      throw Error(Errc::schema_violation, id, "rerouteTarget on a non-reroute rule");
    }
    if (reroute && c->on_false.reroute_target == c->task) {
      throw Error(Errc::schema_violation, id, "reroute target equals attached task");
    }
    require_condition(c->condition, id);
  } else {
    const auto& d = std::get<DiscoveryRule>(r);
    if (d.task.empty()) throw Error(Errc::schema_violation, id, "empty task reference");
    if (d.family && d.family->empty()) throw Error(Errc::schema_violation, id, "empty family");
    require_condition(d.predicate, id);
  }
}

namespace {

void only_attributes(const xml::Element& el, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : el.attributes) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw Error(Errc::schema_violation, el.name + "/@" + k, "unknown attribute");
    }
  }
}

const xml::Element& single_child(const xml::Element& el, std::string_view name) {
  if (el.children.size() != 1 || el.children[0].name != name) {
    throw Error(Errc::schema_violation, el.name, "expected exactly one <" + std::string(name) + ">");
  }
  return el.children[0];
}

Expr wrapped_expr(const xml::Element& wrapper) {
  if (wrapper.children.size() != 1) {
    throw Error(Errc::malformed_expr, wrapper.name, "expected exactly one expression");
  }
  return expr_from_xml(wrapper.children[0]);
}

}  // namespace

Rule rule_from_xml(const xml::Element& el) {
  if (el.name != "rule") throw Error(Errc::schema_violation, el.name, "expected <rule>");
  const auto& id = el.attribute("id");
  const auto& kind_text = el.attribute("kind");
  const auto kind = parse_rule_kind(kind_text);
  if (!kind) throw Error(Errc::unknown_rule_kind, kind_text);

  Rule rule;
  switch (*kind) {
    case RuleKind::behavior: {
      only_attributes(el, {"id", "kind"});
      if (el.children.size() != 1) {
        throw Error(Errc::schema_violation, id, "behavior rule needs exactly one relation element");
      }
      const auto& rel = el.children[0];
      BehaviorRule b;
      b.id = id;
      if (rel.name == "precedence") b.relation = BehaviorRelation::precedence;
      else if (rel.name == "response") b.relation = BehaviorRelation::response;
      else if (rel.name == "exclusive") b.relation = BehaviorRelation::exclusive;
      else throw Error(Errc::schema_violation, rel.name, "unknown relation element");
      only_attributes(rel, {"antecedent", "consequent"});
      if (!rel.children.empty()) throw Error(Errc::schema_violation, rel.name, "unexpected children");
      b.antecedent = rel.attribute("antecedent");
      b.consequent = rel.attribute("consequent");
      rule = std::move(b);
      break;
    }
    case RuleKind::constraint: {
      only_attributes(el, {"id", "kind", "task", "mode", "onFalse", "rerouteTarget"});
      ConstraintRule c;
      c.id = id;
      c.task = el.attribute("task");
      const auto& mode = el.attribute("mode");
      if (mode == "pre") c.mode = ConstraintMode::pre;
      else if (mode == "post") c.mode = ConstraintMode::post;
      else throw Error(Errc::schema_violation, id, "mode must be pre or post");
      const auto& action = el.attribute("onFalse");
      if (action == "fault") c.on_false = OnFalse::fault();
      else if (action == "skip") c.on_false = OnFalse::skip();
      else if (action == "reroute") c.on_false = OnFalse::reroute(el.attribute("rerouteTarget"));
      else throw Error(Errc::schema_violation, id, "onFalse must be fault, skip or reroute");
      if (c.on_false.action != OnFalse::Action::reroute && el.find_attribute("rerouteTarget")) {
        throw Error(Errc::schema_violation, id, "rerouteTarget on a non-reroute rule");
      }
      c.condition = wrapped_expr(single_child(el, "condition"));
      rule = std::move(c);
      break;
    }
    case RuleKind::discovery: {
      only_attributes(el, {"id", "kind", "task", "family"});
      DiscoveryRule d;
      d.id = id;
      d.task = el.attribute("task");
      d.family = el.optional_attribute("family");
      d.predicate = wrapped_expr(single_child(el, "predicate"));
      rule = std::move(d);
      break;
    }
  }
  validate_rule(rule);
  return rule;
}

xml::Element rule_to_xml(const Rule& r) {
  xml::Element el("rule");
  el.set("id", rule_id(r));
  el.set("kind", std::string(rule_kind_name(rule_kind(r))));
  if (const auto* b = std::get_if<BehaviorRule>(&r)) {
    xml::Element rel{std::string(relation_name(b->relation))};
    rel.set("antecedent", b->antecedent).set("consequent", b->consequent);
    el.add(std::move(rel));
  } else if (const auto* c = std::get_if<ConstraintRule>(&r)) {
    el.set("task", c->task);
    el.set("mode", std::string(mode_name(c->mode)));
    el.set("onFalse", std::string(action_name(c->on_false.action)));
    if (c->on_false.action == OnFalse::Action::reroute) {
      el.set("rerouteTarget", c->on_false.reroute_target);
    }
    el.add(xml::Element("condition").add(expr_to_xml(c->condition)));
  } else {
    const auto& d = std::get<DiscoveryRule>(r);
    el.set("task", d.task);
    if (d.family) el.set("family", *d.family);
    el.add(xml::Element("predicate").add(expr_to_xml(d.predicate)));
  }
  return el;
}

Rule parse_rule(std::string_view xml_text) { return rule_from_xml(xml::parse(xml_text)); }

std::vector<Rule> parse_rules(std::string_view xml_text) {
  const auto root = xml::parse(xml_text);
  if (root.name == "rule") return {rule_from_xml(root)};
  if (root.name != "rules") throw Error(Errc::schema_violation, root.name, "expected <rule> or <rules>");
  only_attributes(root, {});
  std::vector<Rule> out;
  out.reserve(root.children.size());
  for (const auto& c : root.children) out.push_back(rule_from_xml(c));
  return out;
}

std::string serialize_rule(const Rule& r) { return xml::write(rule_to_xml(r)); }

std::string serialize_rules(const std::vector<Rule>& rules) {
  xml::Element root("rules");
  for (const auto& r : rules) root.add(rule_to_xml(r));
  return xml::write(root);
}

}  // namespace brain
