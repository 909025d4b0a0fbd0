// SPDX-License-Identifier: Apache-2.0
#include "brain/runtime.hpp"

#include <charconv>
#include <random>
#include <set>

#include "brain/error.hpp"

namespace brain {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

std::int64_t parse_latency(const std::string& text, const std::string& where) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v < 0) {
    throw Error(Errc::schema_violation, where, "latency must be a non-negative integer");
  }
  return v;
}

// Progress of one activity. Sequences keep only the running child, flows
// keep all branches, an if keeps the chosen branch once evaluated.
struct Cursor {
  const Activity* act = nullptr;
  bool done = false;
  bool started = false;  // if: evaluated
  std::size_t index = 0;
  std::vector<Cursor> children;
};

Cursor make_cursor(const Activity& a) {
  Cursor c;
  c.act = &a;
  return c;
}

void settle(Cursor& c) {
  if (c.done) return;
  std::visit(Overloaded{
                 [&](const SequenceActivity& s) {
                   if (c.children.empty()) {
                     if (s.children.empty()) {
                       c.done = true;
                       return;
                     }
                     c.children.push_back(make_cursor(s.children[0]));
                   }
                   while (true) {
                     settle(c.children[0]);
                     if (!c.children[0].done) return;
                     if (++c.index == s.children.size()) {
                       c.done = true;
                       return;
                     }
                     c.children[0] = make_cursor(s.children[c.index]);
                   }
                 },
                 [&](const FlowActivity& f) {
                   if (c.children.empty()) {
                     for (const auto& child : f.children) c.children.push_back(make_cursor(child));
                   }
                   bool all = true;
                   for (auto& child : c.children) {
                     settle(child);
                     all = all && child.done;
                   }
                   c.done = all;
                 },
                 [&](const IfActivity&) {
                   if (!c.started) return;
                   if (c.children.empty()) {
                     c.done = true;
                     return;
                   }
                   settle(c.children[0]);
                   c.done = c.children[0].done;
                 },
                 [&](const EmptyActivity&) { c.done = true; },
                 [](const auto&) {},
             },
             c.act->node);
}

using Path = std::vector<std::size_t>;

void ready(const Cursor& c, Path& prefix, std::vector<Path>& out) {
  if (c.done) return;
  const bool composite = std::holds_alternative<SequenceActivity>(c.act->node) ||
                         std::holds_alternative<FlowActivity>(c.act->node) ||
                         (std::holds_alternative<IfActivity>(c.act->node) && c.started);
  if (!composite) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t i = 0; i < c.children.size(); ++i) {
    prefix.push_back(i);
    ready(c.children[i], prefix, out);
    prefix.pop_back();
  }
}

struct Machine {
  const BpelProcess* process = nullptr;
  const Mocks* mocks = nullptr;
  Cursor root;
  Env env;
  std::int64_t clock = 0;
  ExecutionTrace trace;
  bool halted = false;

  void emit(EventKind kind, std::string subject, std::string detail = {}) {
    trace.events.push_back({clock, kind, std::move(subject), std::move(detail)});
  }

  void run_task(const std::string& name, const std::string& link, const std::string& operation) {
    const auto& provider = *process->find_link(link)->provider;
    const auto& response = mocks->find(provider)->second.operations.find(operation)->second;
    emit(EventKind::task_start, name);
    for (const auto& [k, v] : response.outputs) env.insert_or_assign(k, v);
    clock += response.latency;
    emit(EventKind::task_end, name);
  }

  void step(const Path& path) {
    Cursor* c = &root;
    for (auto i : path) c = &c->children[i];
    std::visit(Overloaded{
                   [&](const IfActivity& i) {
                     const bool verdict = eval_expr(i.condition, env);
                     emit(EventKind::rule_eval, i.name, (i.rule.empty() ? std::string() : i.rule + " ") +
                                                            (verdict ? "true" : "false"));
                     c->started = true;
                     if (verdict) {
                       c->children.push_back(make_cursor(*i.then_branch));
                       emit(EventKind::branch_taken, i.name, "then");
                     } else if (i.else_branch) {
                       c->children.push_back(make_cursor(**i.else_branch));
                       emit(EventKind::branch_taken, i.name, "else");
                     } else {
                       emit(EventKind::branch_taken, i.name, "none");
                     }
                   },
                   [&](const InvokeActivity& t) { run_task(t.name, t.partner_link, t.operation); },
                   [&](const ReceiveActivity& t) { run_task(t.name, t.partner_link, t.operation); },
                   [&](const ReplyActivity& t) { run_task(t.name, t.partner_link, t.operation); },
                   [&](const FaultActivity& f) {
                     emit(EventKind::fault_raised, f.name);
                     trace.status = TraceStatus::faulted;
                     halted = true;
                   },
                   [](const auto&) {},
               },
               c->act->node);
    c->done = !std::holds_alternative<IfActivity>(c->act->node);
    settle(root);
  }

  std::vector<Path> choices() const {
    std::vector<Path> out;
    if (halted) return out;
    Path prefix;
    ready(root, prefix, out);
    return out;
  }
};

void check_task(const BpelProcess& p, const Mocks& mocks, const std::string& link, const std::string& operation) {
  const auto* l = p.find_link(link);
  if (!l) throw Error(Errc::unknown_partner_link, link);
  if (!l->provider) throw Error(Errc::unbound_link, link);
  auto it = mocks.find(*l->provider);
  if (it == mocks.end() || !it->second.operations.contains(operation)) {
    throw Error(Errc::missing_mock, {*l->provider, operation});
  }
}

void preflight(const BpelProcess& p, const Mocks& mocks, const Activity& a) {
  std::visit(Overloaded{
                 [&](const SequenceActivity& s) {
                   for (const auto& c : s.children) preflight(p, mocks, c);
                 },
                 [&](const FlowActivity& f) {
                   for (const auto& c : f.children) preflight(p, mocks, c);
                 },
                 [&](const IfActivity& i) {
                   preflight(p, mocks, *i.then_branch);
                   if (i.else_branch) preflight(p, mocks, **i.else_branch);
                 },
                 [&](const InvokeActivity& t) { check_task(p, mocks, t.partner_link, t.operation); },
                 [&](const ReceiveActivity& t) { check_task(p, mocks, t.partner_link, t.operation); },
                 [&](const ReplyActivity& t) { check_task(p, mocks, t.partner_link, t.operation); },
                 [](const auto&) {},
             },
             a.node);
}

Machine start(const BpelProcess& process, const Mocks& mocks, const Env& env) {
  for (const auto& l : process.partner_links) {
    if (!l.provider) throw Error(Errc::unbound_link, l.name);
  }
  preflight(process, mocks, process.body);
  Machine m;
  m.process = &process;
  m.mocks = &mocks;
  m.env = env;
  m.root = make_cursor(process.body);
  settle(m.root);
  return m;
}

struct Explorer {
  const ScheduleOptions& options;
  std::map<std::string, ExecutionTrace> found;

  void explore(Machine& m) {
    if (options.tick_bound && m.clock > *options.tick_bound) {
      throw Error(Errc::too_large, std::to_string(m.clock), "tick bound exceeded");
    }
    const auto paths = m.choices();
    if (paths.empty()) {
      found.try_emplace(trace_to_text(m.trace), m.trace);
      if (found.size() > options.max_traces) {
        throw Error(Errc::too_large, std::to_string(found.size()), "too many schedules");
      }
      return;
    }
    if (paths.size() == 1) {
      m.step(paths[0]);
      explore(m);
      return;
    }
    for (const auto& path : paths) {
      Machine next = m;
      next.step(path);
      explore(next);
    }
  }
};

bool is(const TraceEvent& e, EventKind kind, const std::string& subject) {
  return e.kind == kind && e.subject == subject;
}

}  // namespace

std::string_view event_kind_name(EventKind k) noexcept {
  switch (k) {
    case EventKind::task_start: return "taskStart";
    case EventKind::task_end: return "taskEnd";
    case EventKind::rule_eval: return "ruleEval";
    case EventKind::fault_raised: return "faultRaised";
    case EventKind::branch_taken: return "branchTaken";
  }
  return "?";
}

std::vector<std::string> ExecutionTrace::task_order() const {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::task_start) out.push_back(e.subject);
  }
  return out;
}

Mocks load_mocks(std::string_view xml_text) {
  const auto root = xml::parse(xml_text);
  if (root.name != "mocks") throw Error(Errc::schema_violation, root.name, "expected <mocks>");
  Mocks out;
  for (const auto& el : root.children) {
    if (el.name != "endpoint") throw Error(Errc::schema_violation, "mocks/" + el.name, "unknown element");
    MockEndpoint ep;
    ep.provider = el.attribute("provider");
    for (const auto& op : el.children) {
      const auto where = ep.provider + "/" + op.name;
      if (op.name != "operation") throw Error(Errc::schema_violation, where, "unknown element");
      MockResponse r;
      r.latency = parse_latency(op.optional_attribute("latency").value_or("1"), where);
      for (const auto& o : op.children) {
        if (o.name != "output") throw Error(Errc::schema_violation, where + "/" + o.name, "unknown element");
        auto [path, value] = parse_scalar_element(o);
        r.outputs.insert_or_assign(std::move(path), std::move(value));
      }
      if (!ep.operations.emplace(op.attribute("name"), std::move(r)).second) {
        throw Error(Errc::schema_violation, ep.provider + "/" + op.attribute("name"), "duplicate operation");
      }
    }
    auto id = ep.provider;
    if (!out.emplace(std::move(id), std::move(ep)).second) {
      throw Error(Errc::schema_violation, el.attribute("provider"), "duplicate endpoint");
    }
  }
  return out;
}

std::string serialize_mocks(const Mocks& mocks) {
  xml::Element root("mocks");
  for (const auto& [id, ep] : mocks) {
    xml::Element el("endpoint");
    el.set("provider", id);
    for (const auto& [name, r] : ep.operations) {
      xml::Element op("operation");
      op.set("name", name).set("latency", std::to_string(r.latency));
      for (const auto& [k, v] : r.outputs) op.add(scalar_element("output", k, v));
      el.add(std::move(op));
    }
    root.add(std::move(el));
  }
  return xml::write(root);
}

Env load_env(std::string_view xml_text) {
  const auto root = xml::parse(xml_text);
  if (root.name != "env") throw Error(Errc::schema_violation, root.name, "expected <env>");
  Env env;
  for (const auto& el : root.children) {
    if (el.name != "var") throw Error(Errc::schema_violation, "env/" + el.name, "unknown element");
    auto [path, value] = parse_scalar_element(el);
    env.insert_or_assign(std::move(path), std::move(value));
  }
  return env;
}

std::string serialize_env(const Env& env) {
  xml::Element root("env");
  for (const auto& [k, v] : env) root.add(scalar_element("var", k, v));
  return xml::write(root);
}

ExecutionTrace execute(const BpelProcess& process, const Mocks& mocks, const Env& initial_env, std::uint64_t seed) {
  Machine m = start(process, mocks, initial_env);
  std::mt19937_64 rng(seed);
  while (true) {
    const auto paths = m.choices();
    if (paths.empty()) break;
    const std::size_t pick = paths.size() == 1 ? 0 : static_cast<std::size_t>(rng() % paths.size());
    m.step(paths[pick]);
  }
  return std::move(m.trace);
}

std::vector<ExecutionTrace> enumerate_schedules(const BpelProcess& process, const Mocks& mocks,
                                                const Env& initial_env, const ScheduleOptions& options) {
  const auto tasks = task_activities(process.body).size();
  if (tasks > options.max_tasks) {
    throw Error(Errc::too_large, std::to_string(tasks), "too many task activities to enumerate");
  }
  Machine m = start(process, mocks, initial_env);
  Explorer ex{options, {}};
  ex.explore(m);
  std::vector<ExecutionTrace> out;
  out.reserve(ex.found.size());
  for (auto& [text, trace] : ex.found) out.push_back(std::move(trace));
  return out;
}

std::vector<Violation> check_conformance(const ExecutionTrace& trace, const std::vector<BehaviorRule>& rules) {
  std::vector<Violation> out;
  const auto& ev = trace.events;
  for (const auto& r : rules) {
    Violation v{r.id, {}, {}};
    const auto& a = r.antecedent;
    const auto& b = r.consequent;
    switch (r.relation) {
      case BehaviorRelation::precedence: {
        bool a_ended = false;
        for (std::size_t i = 0; i < ev.size(); ++i) {
          if (is(ev[i], EventKind::task_end, a)) a_ended = true;
          if (is(ev[i], EventKind::task_start, b) && !a_ended) v.positions.push_back(i);
        }
        break;
      }
      case BehaviorRelation::response: {
        if (trace.status != TraceStatus::completed) break;
        std::vector<std::size_t> pending;
        for (std::size_t i = 0; i < ev.size(); ++i) {
          if (is(ev[i], EventKind::task_end, a)) pending.push_back(i);
          if (is(ev[i], EventKind::task_end, b)) pending.clear();
        }
        v.positions = std::move(pending);
        break;
      }
      case BehaviorRelation::exclusive: {
        std::optional<std::size_t> first_a;
        std::optional<std::size_t> first_b;
        for (std::size_t i = 0; i < ev.size(); ++i) {
          if (!first_a && is(ev[i], EventKind::task_start, a)) first_a = i;
          if (!first_b && is(ev[i], EventKind::task_start, b)) first_b = i;
        }
        if (first_a && first_b) v.positions = {std::min(*first_a, *first_b), std::max(*first_a, *first_b)};
        break;
      }
    }
    if (v.positions.empty()) continue;
    for (auto i : v.positions) v.evidence.push_back(ev[i]);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace brain
