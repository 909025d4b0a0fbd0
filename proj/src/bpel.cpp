// SPDX-License-Identifier: Apache-2.0
#include "brain/bpel.hpp"

#include <algorithm>
#include <set>

#include "brain/error.hpp"
#include "brain/registry.hpp"

namespace brain {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

void collect_tasks(const Activity& a, std::vector<std::string>& out) {
  std::visit(Overloaded{
                 [&](const SequenceActivity& s) {
                   for (const auto& c : s.children) collect_tasks(c, out);
                 },
                 [&](const FlowActivity& f) {
                   for (const auto& c : f.children) collect_tasks(c, out);
                 },
                 [&](const IfActivity& i) {
                   collect_tasks(*i.then_branch, out);
                   if (i.else_branch) collect_tasks(**i.else_branch, out);
                 },
                 [&](const InvokeActivity& t) { out.push_back(t.name); },
                 [&](const ReceiveActivity& t) { out.push_back(t.name); },
                 [&](const ReplyActivity& t) { out.push_back(t.name); },
                 [](const FaultActivity&) {},
                 [](const EmptyActivity&) {},
             },
             a.node);
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(',', start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Generator {
  std::map<std::string, const Task*, std::less<>> catalog;
  std::optional<std::string> requester;
  std::string receive_task;
  std::string reply_task;

  Activity task(const std::string& id) const {
    const Task& t = *catalog.at(id);
    auto link = partner_link_name(t.participant);
    if (id == receive_task) return ReceiveActivity{t.id, link, t.operation, t.output_vars};
    if (id == reply_task) return ReplyActivity{t.id, link, t.operation, t.input_vars};
    return InvokeActivity{t.id, link, t.operation, t.input_vars, t.output_vars};
  }

  Activity choice(const Fragment& f, std::size_t i) const {
    const auto& guard = f.guards[i];
    if (!guard) return convert(f.children[i]);
    IfActivity node{i == 0 ? f.split_id : f.split_id + "/" + std::to_string(i), guard->rule, guard->condition,
                    convert(f.children[i]), std::nullopt};
    if (i + 1 < f.children.size()) node.else_branch = choice(f, i + 1);
    return node;
  }

  Activity convert(const Fragment& f) const {
    switch (f.kind) {
      case Fragment::Kind::task:
        return task(f.name);
      case Fragment::Kind::sequence: {
        SequenceActivity s;
        for (const auto& c : f.children) s.children.push_back(convert(c));
        return s;
      }
      case Fragment::Kind::parallel: {
        FlowActivity s;
        for (const auto& c : f.children) s.children.push_back(convert(c));
        return s;
      }
      case Fragment::Kind::choice:
        return choice(f, 0);
      case Fragment::Kind::fault:
        return FaultActivity{f.name};
      case Fragment::Kind::empty:
        return EmptyActivity{};
      case Fragment::Kind::loop:
        break;
    }
    throw Error(Errc::invalid_workflow, f.split_id, "loops are not supported");
  }
};

std::string at(const std::string& parent, std::string_view name, std::size_t index) {
  return parent + "/" + std::string(name) + "[" + std::to_string(index) + "]";
}

struct Validator {
  const BpelProcess& process;
  std::set<std::string> variables;
  std::set<std::string> names;

  void fail(const std::string& path, std::string message) const {
    throw Error(Errc::schema_violation, path, std::move(message));
  }

  void name(const std::string& path, const std::string& n) {
    if (n.empty()) fail(path, "empty name");
    if (!names.insert(n).second) fail(path, "duplicate activity name '" + n + "'");
  }

  void task(const std::string& path, const std::string& n, const std::string& link, const std::string& op,
            std::initializer_list<const std::vector<std::string>*> vars) {
    name(path, n);
    if (!process.find_link(link)) fail(path, "undeclared partner link '" + link + "'");
    if (op.empty()) fail(path, "empty operation");
    for (const auto* list : vars) {
      for (const auto& v : *list) {
        if (!variables.contains(v)) fail(path, "undeclared variable '" + v + "'");
      }
    }
  }

  void visit(const Activity& a, const std::string& path) {
    std::visit(Overloaded{
                   [&](const SequenceActivity& s) {
                     if (s.children.empty()) fail(path, "empty sequence");
                     for (std::size_t i = 0; i < s.children.size(); ++i) {
                       visit(s.children[i], path + "/" + std::to_string(i));
                     }
                   },
                   [&](const FlowActivity& f) {
                     if (f.children.empty()) fail(path, "empty flow");
                     for (std::size_t i = 0; i < f.children.size(); ++i) {
                       visit(f.children[i], path + "/" + std::to_string(i));
                     }
                   },
                   [&](const IfActivity& i) {
                     name(path, i.name);
                     visit(*i.then_branch, path + "/then");
                     if (i.else_branch) visit(**i.else_branch, path + "/else");
                   },
                   [&](const InvokeActivity& t) {
                     task(path, t.name, t.partner_link, t.operation, {&t.input_vars, &t.output_vars});
                   },
                   [&](const ReceiveActivity& t) { task(path, t.name, t.partner_link, t.operation, {&t.vars}); },
                   [&](const ReplyActivity& t) { task(path, t.name, t.partner_link, t.operation, {&t.vars}); },
                   [&](const FaultActivity& f) { name(path, f.name); },
                   [](const EmptyActivity&) {},
               },
               a.node);
  }
};

xml::Element activity_to_xml(const Activity& a) {
  return std::visit(
      Overloaded{
          [](const SequenceActivity& s) {
            xml::Element el("sequence");
            for (const auto& c : s.children) el.add(activity_to_xml(c));
            return el;
          },
          [](const FlowActivity& f) {
            xml::Element el("flow");
            for (const auto& c : f.children) el.add(activity_to_xml(c));
            return el;
          },
          [](const IfActivity& i) {
            xml::Element el("if");
            el.set("name", i.name);
            if (!i.rule.empty()) el.set("rule", i.rule);
            el.add(xml::Element("condition").add(expr_to_xml(i.condition)));
            el.add(xml::Element("then").add(activity_to_xml(*i.then_branch)));
            if (i.else_branch) el.add(xml::Element("else").add(activity_to_xml(**i.else_branch)));
            return el;
          },
          [](const InvokeActivity& t) {
            xml::Element el("invoke");
            el.set("name", t.name).set("partnerLink", t.partner_link).set("operation", t.operation);
            if (!t.input_vars.empty()) el.set("inputVariable", join_list(t.input_vars));
            if (!t.output_vars.empty()) el.set("outputVariable", join_list(t.output_vars));
            return el;
          },
          [](const ReceiveActivity& t) {
            xml::Element el("receive");
            el.set("name", t.name).set("partnerLink", t.partner_link).set("operation", t.operation);
            if (!t.vars.empty()) el.set("variable", join_list(t.vars));
            return el;
          },
          [](const ReplyActivity& t) {
            xml::Element el("reply");
            el.set("name", t.name).set("partnerLink", t.partner_link).set("operation", t.operation);
            if (!t.vars.empty()) el.set("variable", join_list(t.vars));
            return el;
          },
          [](const FaultActivity& f) {
            xml::Element el("fault");
            el.set("name", f.name);
            return el;
          },
          [](const EmptyActivity&) { return xml::Element("empty"); },
      },
      a.node);
}

class Reader {
 public:
  [[noreturn]] static void fail(const std::string& path, std::string message) {
    throw Error(Errc::schema_violation, path, std::move(message));
  }

  static void allow(const xml::Element& el, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : el.attributes) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(path, "unexpected attribute '" + k + "'");
    }
    if (!el.text.empty() && el.children.empty() && el.text.find_first_not_of(" \t\r\n") != std::string::npos) {
      fail(path, "unexpected text");
    }
  }

  static std::string required(const xml::Element& el, const std::string& path, std::string_view key) {
    const auto* v = el.find_attribute(key);
    if (!v) fail(path, "missing attribute '" + std::string(key) + "'");
    return *v;
  }

  static const xml::Element& only_child(const xml::Element& el, const std::string& path) {
    if (el.children.size() != 1) fail(path, "expected exactly one child element");
    return el.children.front();
  }

  static Activity activity(const xml::Element& el, const std::string& path) {
    if (el.name == "sequence" || el.name == "flow") {
      allow(el, path, {});
      std::vector<Activity> children;
      for (std::size_t i = 0; i < el.children.size(); ++i) {
        children.push_back(activity(el.children[i], at(path, el.children[i].name, i)));
      }
      if (el.name == "sequence") return SequenceActivity{std::move(children)};
      return FlowActivity{std::move(children)};
    }
    if (el.name == "if") {
      allow(el, path, {"name", "rule"});
      auto name = required(el, path, "name");
      auto rule = el.optional_attribute("rule").value_or("");
      const auto n = el.children.size();
      if (n < 2 || n > 3 || el.children[0].name != "condition" || el.children[1].name != "then" ||
          (n == 3 && el.children[2].name != "else")) {
        fail(path, "expected <condition>, <then> and optional <else>");
      }
      const auto cpath = path + "/condition";
      allow(el.children[0], cpath, {});
      std::optional<Expr> condition;
      try {
        condition = expr_from_xml(only_child(el.children[0], cpath));
      } catch (const Error& e) {
        if (e.code() != Errc::malformed_expr) throw;
        fail(cpath, e.message());
      }
      auto branch = [&](const xml::Element& wrapper, const std::string& p) {
        allow(wrapper, p, {});
        const auto& inner = only_child(wrapper, p);
        return activity(inner, p + "/" + inner.name);
      };
      IfActivity node{std::move(name), std::move(rule), std::move(*condition), branch(el.children[1], path + "/then"),
                      std::nullopt};
      if (n == 3) node.else_branch = branch(el.children[2], path + "/else");
      return node;
    }
    if (el.name == "invoke") {
      allow(el, path, {"name", "partnerLink", "operation", "inputVariable", "outputVariable"});
      if (!el.children.empty()) fail(path, "unexpected child element");
      return InvokeActivity{required(el, path, "name"), required(el, path, "partnerLink"),
                            required(el, path, "operation"),
                            split_list(el.optional_attribute("inputVariable").value_or("")),
                            split_list(el.optional_attribute("outputVariable").value_or(""))};
    }
    if (el.name == "receive" || el.name == "reply") {
      allow(el, path, {"name", "partnerLink", "operation", "variable"});
      if (!el.children.empty()) fail(path, "unexpected child element");
      auto name = required(el, path, "name");
      auto link = required(el, path, "partnerLink");
      auto op = required(el, path, "operation");
      auto vars = split_list(el.optional_attribute("variable").value_or(""));
      if (el.name == "receive") return ReceiveActivity{std::move(name), std::move(link), std::move(op), std::move(vars)};
      return ReplyActivity{std::move(name), std::move(link), std::move(op), std::move(vars)};
    }
    if (el.name == "fault") {
      allow(el, path, {"name"});
      if (!el.children.empty()) fail(path, "unexpected child element");
      return FaultActivity{required(el, path, "name")};
    }
    if (el.name == "empty") {
      allow(el, path, {});
      if (!el.children.empty()) fail(path, "unexpected child element");
      return EmptyActivity{};
    }
    fail(path, "unknown activity <" + el.name + ">");
  }

  static BpelProcess process(const xml::Element& root) {
    const std::string path = "/process";
    if (root.name != "process") fail("/" + root.name, "expected <process>");
    allow(root, path, {"name", "executable"});
    BpelProcess p;
    p.name = required(root, path, "name");
    const auto exec = required(root, path, "executable");
    if (exec != "true" && exec != "false") fail(path, "executable must be true or false");
    p.executable = exec == "true";
    if (root.children.size() != 3 || root.children[0].name != "partnerLinks" ||
        root.children[1].name != "variables") {
      fail(path, "expected <partnerLinks>, <variables> and one activity");
    }
    const auto& links = root.children[0];
    allow(links, path + "/partnerLinks", {});
    for (std::size_t i = 0; i < links.children.size(); ++i) {
      const auto& el = links.children[i];
      const auto lpath = at(path + "/partnerLinks", el.name, i);
      if (el.name != "partnerLink") fail(lpath, "unknown element");
      allow(el, lpath, {"name", "family", "provider"});
      if (!el.children.empty()) fail(lpath, "unexpected child element");
      p.partner_links.push_back({required(el, lpath, "name"), required(el, lpath, "family"),
                                 el.optional_attribute("provider")});
    }
    const auto& vars = root.children[1];
    allow(vars, path + "/variables", {});
    for (std::size_t i = 0; i < vars.children.size(); ++i) {
      const auto& el = vars.children[i];
      const auto vpath = at(path + "/variables", el.name, i);
      if (el.name != "variable") fail(vpath, "unknown element");
      allow(el, vpath, {"name"});
      if (!el.children.empty()) fail(vpath, "unexpected child element");
      p.variables.push_back(required(el, vpath, "name"));
    }
    const auto& body = root.children[2];
    p.body = activity(body, path + "/" + body.name);
    return p;
  }
};

}  // namespace

const PartnerLink* BpelProcess::find_link(std::string_view link) const {
  for (const auto& l : partner_links) {
    if (l.name == link) return &l;
  }
  return nullptr;
}

std::vector<std::string> task_activities(const Activity& body) {
  std::vector<std::string> out;
  collect_tasks(body, out);
  return out;
}

std::string partner_link_name(std::string_view participant) { return std::string(participant) + "PL"; }

BpelProcess graph_to_bpel(const WorkflowGraph& wf, const std::vector<Task>& catalog, std::string process_name,
                          const std::optional<std::string>& requester) {
  const auto tree = decompose_workflow(wf);
  Generator gen;
  for (const auto& t : catalog) gen.catalog.emplace(t.id, &t);
  const auto ids = tree.tasks();
  std::set<std::string> participants;
  std::set<std::string> variables;
  for (const auto& id : ids) {
    auto it = gen.catalog.find(id);
    if (it == gen.catalog.end()) throw Error(Errc::unresolved_task, id);
    participants.insert(it->second->participant);
    variables.insert(it->second->input_vars.begin(), it->second->input_vars.end());
    variables.insert(it->second->output_vars.begin(), it->second->output_vars.end());
  }
  if (requester && ids.size() >= 2) {
    auto performed_by_requester = [&](const std::string& node) {
      const auto* n = wf.find(node);
      return n && n->kind == NodeKind::task && gen.catalog.at(node)->participant == *requester;
    };
    if (performed_by_requester(wf.entry)) gen.receive_task = wf.entry;
    if (wf.exit != wf.entry && performed_by_requester(wf.exit)) gen.reply_task = wf.exit;
  }

  BpelProcess p;
  p.name = std::move(process_name);
  for (const auto& part : participants) p.partner_links.push_back({partner_link_name(part), part, std::nullopt});
  std::sort(p.partner_links.begin(), p.partner_links.end(),
            [](const PartnerLink& a, const PartnerLink& b) { return a.name < b.name; });
  p.variables.assign(variables.begin(), variables.end());
  p.body = gen.convert(tree);
  return p;
}

BpelProcess bind_partners(const BpelProcess& process, const std::map<std::string, std::string>& bindings,
                          const Registry& registry) {
  BpelProcess out = process;
  for (const auto& [link, provider_id] : bindings) {
    auto it = std::find_if(out.partner_links.begin(), out.partner_links.end(),
                           [&](const PartnerLink& l) { return l.name == link; });
    if (it == out.partner_links.end()) throw Error(Errc::unknown_partner_link, link);
    auto provider = registry.find(provider_id);
    if (!provider) throw Error(Errc::unknown_provider, provider_id);
    if (provider->family != it->family) {
      throw Error(Errc::family_mismatch, {link, provider_id},
                  "link family '" + it->family + "', provider family '" + provider->family + "'");
    }
    it->provider = provider_id;
  }
  for (const auto& l : out.partner_links) {
    if (!l.provider) throw Error(Errc::unbound_link, l.name);
  }
  out.executable = true;
  return out;
}

void validate_bpel(const BpelProcess& process) {
  Validator v{process, {}, {}};
  const std::string path = "/process";
  if (process.name.empty()) v.fail(path, "empty process name");
  std::set<std::string> links;
  for (std::size_t i = 0; i < process.partner_links.size(); ++i) {
    const auto& l = process.partner_links[i];
    const auto lpath = at(path + "/partnerLinks", "partnerLink", i);
    if (l.name.empty() || l.family.empty()) v.fail(lpath, "empty name or family");
    if (!links.insert(l.name).second) v.fail(lpath, "duplicate partner link '" + l.name + "'");
    if (process.executable && !l.provider) v.fail(lpath, "executable process with unbound link");
    if (!process.executable && l.provider) v.fail(lpath, "abstract process with bound link");
  }
  for (std::size_t i = 0; i < process.variables.size(); ++i) {
    const auto& name = process.variables[i];
    if (name.empty()) v.fail(at(path + "/variables", "variable", i), "empty variable name");
    if (!v.variables.insert(name).second) v.fail(at(path + "/variables", "variable", i), "duplicate variable");
  }
  v.visit(process.body, path + "/body");
}

xml::Element bpel_to_xml(const BpelProcess& process) {
  xml::Element root("process");
  root.set("name", process.name).set("executable", process.executable ? "true" : "false");
  xml::Element links("partnerLinks");
  for (const auto& l : process.partner_links) {
    xml::Element el("partnerLink");
    el.set("name", l.name).set("family", l.family);
    if (l.provider) el.set("provider", *l.provider);
    links.add(std::move(el));
  }
  root.add(std::move(links));
  xml::Element vars("variables");
  for (const auto& v : process.variables) vars.add(xml::Element("variable").set("name", v));
  root.add(std::move(vars));
  root.add(activity_to_xml(process.body));
  return root;
}

std::string serialize_bpel(const BpelProcess& process) { return xml::write(bpel_to_xml(process)); }

BpelProcess parse_bpel(std::string_view xml_text) {
  auto p = Reader::process(xml::parse(xml_text));
  validate_bpel(p);
  return p;
}

}  // namespace brain
