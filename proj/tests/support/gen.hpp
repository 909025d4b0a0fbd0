// SPDX-License-Identifier: Apache-2.0
// Random instance generators shared by the property tests and the acceptance run.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "brain/bpel.hpp"
#include "brain/goals.hpp"
#include "brain/rules.hpp"
#include "brain/runtime.hpp"

namespace brain::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
inline bool coin(Rng& rng, unsigned percent = 50) { return rng() % 100 < percent; }

template <class T>
const T& one_of(Rng& rng, const std::vector<T>& items) {
  return items[pick(rng, items.size())];
}

inline std::string gen_text(Rng& rng) {
  static const std::vector<std::string> pieces = {"web", "kiosk", "a b", "x&y", "<tag>", "\"q\"", "it's",
                                                  "tab\there", "caf\xc3\xa9", "  pad ", "line\nbreak", "cr\rlf",
                                                  "]]>", "&amp;", "0"};
  std::string out;
  const auto n = pick(rng, 3);
  for (std::size_t i = 0; i < n; ++i) out += one_of(rng, pieces);
  return out;
}

inline double gen_number(Rng& rng) {
  switch (pick(rng, 5)) {
    case 0: return static_cast<double>(static_cast<int>(pick(rng, 2001)) - 1000);
    case 1: return static_cast<double>(pick(rng, 64)) / 8.0;
    case 2: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
    case 3: return one_of(rng, std::vector<double>{0.1, -0.0, 1e300, 5e-324, 123456789.125, 2.5e-7});
    default: return static_cast<double>(pick(rng, 24));
  }
}

inline Scalar gen_scalar(Rng& rng) {
  switch (pick(rng, 3)) {
    case 0: return coin(rng);
    case 1: return gen_number(rng);
    default: return gen_text(rng);
  }
}

inline std::string gen_path(Rng& rng) {
  static const std::vector<std::string> paths = {"order.valid", "citizen.accountBalance", "tax.amount",
                                                 "fulfillmentHours", "channel", "contract.tier", "a", "b.c.d"};
  return one_of(rng, paths);
}

/// Well-formed boolean expression over arbitrary scalars.
inline Expr gen_expr(Rng& rng, int depth) {
  const auto choice = depth <= 0 ? pick(rng, 4) : pick(rng, 7);
  switch (choice) {
    case 0: return Expr::constant(coin(rng));
    case 1: return Expr::var(gen_path(rng));
    case 2: {
      static const std::vector<CmpOp> ops = {CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge};
      return Expr::compare(one_of(rng, ops), Expr::var(gen_path(rng)), Expr::constant(gen_number(rng)));
    }
    case 3: return Expr::compare(coin(rng) ? CmpOp::eq : CmpOp::ne, Expr::var(gen_path(rng)),
                                 Expr::constant(gen_scalar(rng)));
    case 4: return Expr::negate(gen_expr(rng, depth - 1));
    default: {
      std::vector<Expr> ops;
      const auto n = 2 + pick(rng, 2);
      for (std::size_t i = 0; i < n; ++i) ops.push_back(gen_expr(rng, depth - 1));
      return choice == 5 ? Expr::all(std::move(ops)) : Expr::any(std::move(ops));
    }
  }
}

inline std::string gen_id(Rng& rng, const std::string& prefix) { return prefix + std::to_string(pick(rng, 100000)); }

inline std::vector<std::string> task_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("T" + std::to_string(i));
  return out;
}

inline Rule gen_rule(Rng& rng, const std::string& id, const std::vector<std::string>& tasks) {
  switch (pick(rng, 3)) {
    case 0: {
      static const std::vector<BehaviorRelation> rels = {BehaviorRelation::precedence, BehaviorRelation::response,
                                                         BehaviorRelation::exclusive};
      auto a = one_of(rng, tasks);
      auto b = one_of(rng, tasks);
      while (b == a && tasks.size() > 1) b = one_of(rng, tasks);
      return BehaviorRule{id, one_of(rng, rels), a, b};
    }
    case 1: {
      ConstraintRule c;
      c.id = id;
      c.task = one_of(rng, tasks);
      c.mode = coin(rng) ? ConstraintMode::pre : ConstraintMode::post;
      c.condition = gen_expr(rng, 3);
      switch (pick(rng, 3)) {
        case 0: c.on_false = OnFalse::fault(); break;
        case 1: c.on_false = OnFalse::skip(); break;
        default: {
          auto target = one_of(rng, tasks);
          if (target == c.task) target += "x";
          c.on_false = OnFalse::reroute(target);
          break;
        }
      }
      return c;
    }
    default: {
      DiscoveryRule d;
      d.id = id;
      d.task = one_of(rng, tasks);
      if (coin(rng, 70)) d.family = one_of(rng, std::vector<std::string>{"Citizen", "FastPay", "Bank & Co"});
      d.predicate = gen_expr(rng, 3);
      return d;
    }
  }
}

inline Goal gen_goal(Rng& rng, int depth, std::size_t& next_goal, const std::vector<std::string>& tasks) {
  Goal g;
  g.id = "G" + std::to_string(next_goal++);
  g.name = coin(rng, 80) ? "goal " + g.id : gen_text(rng);
  g.ordered = coin(rng);
  if (depth > 0 && coin(rng, 65)) {
    const auto n = 1 + pick(rng, 3);
    for (std::size_t i = 0; i < n; ++i) g.children.push_back(gen_goal(rng, depth - 1, next_goal, tasks));
  } else {
    const auto n = 1 + pick(rng, 3);
    for (std::size_t i = 0; i < n; ++i) g.task_refs.push_back(one_of(rng, tasks));
  }
  return g;
}

inline GoalModel gen_goal_model(Rng& rng, std::size_t max_tasks = 8, int depth = 3) {
  GoalModel m;
  const auto n = 1 + pick(rng, max_tasks);
  static const std::vector<std::string> actors = {"Citizen", "PublicAdministration", "FinancialInstitution"};
  for (std::size_t i = 0; i < n; ++i) {
    Task t;
    t.id = "T" + std::to_string(i);
    t.name = coin(rng, 80) ? "Task " + t.id : gen_text(rng);
    t.operation = "op" + std::to_string(i);
    t.participant = one_of(rng, actors);
    for (std::size_t k = pick(rng, 3); k > 0; --k) t.input_vars.push_back("v" + std::to_string(pick(rng, 6)));
    for (std::size_t k = pick(rng, 3); k > 0; --k) t.output_vars.push_back("v" + std::to_string(pick(rng, 6)));
    m.tasks.push_back(std::move(t));
  }
  if (coin(rng)) m.requester = one_of(rng, actors);
  std::vector<std::string> ids;
  for (const auto& t : m.tasks) ids.push_back(t.id);
  std::size_t next_goal = 0;
  m.root = gen_goal(rng, depth, next_goal, ids);
  return m;
}

struct BpelGen {
  Rng& rng;
  std::vector<std::string> links;
  std::vector<std::string> vars;
  std::size_t next = 0;

  std::vector<std::string> some_vars() {
    std::set<std::string> out;
    for (std::size_t k = pick(rng, 3); k > 0; --k) out.insert(one_of(rng, vars));
    return {out.begin(), out.end()};
  }

  Activity leaf() {
    const auto name = "a" + std::to_string(next++);
    switch (pick(rng, 6)) {
      case 0: return ReceiveActivity{name, one_of(rng, links), "op" + name, some_vars()};
      case 1: return ReplyActivity{name, one_of(rng, links), "op" + name, some_vars()};
      case 2: return FaultActivity{name};
      case 3: return EmptyActivity{};
      default: return InvokeActivity{name, one_of(rng, links), "op" + name, some_vars(), some_vars()};
    }
  }

  Activity activity(int depth) {
    if (depth <= 0 || coin(rng, 35)) return leaf();
    switch (pick(rng, 3)) {
      case 0:
      case 1: {
        std::vector<Activity> kids;
        for (std::size_t n = 1 + pick(rng, 3); n > 0; --n) kids.push_back(activity(depth - 1));
        if (coin(rng)) return SequenceActivity{std::move(kids)};
        return FlowActivity{std::move(kids)};
      }
      default: {
        IfActivity node{"if" + std::to_string(next++), coin(rng, 80) ? "R" + std::to_string(pick(rng, 9)) : "",
                        gen_expr(rng, 2), activity(depth - 1), std::nullopt};
        if (coin(rng)) node.else_branch = activity(depth - 1);
        return node;
      }
    }
  }
};

inline BpelProcess gen_bpel(Rng& rng) {
  BpelProcess p;
  p.name = coin(rng, 80) ? "P" + std::to_string(pick(rng, 1000)) : gen_text(rng) + "x";
  p.executable = coin(rng);
  static const std::vector<std::string> families = {"Citizen", "FinancialInstitution", "PublicAdministration"};
  const auto nlinks = 1 + pick(rng, 3);
  for (std::size_t i = 0; i < nlinks; ++i) {
    PartnerLink l{families[i] + "PL", families[i], std::nullopt};
    if (p.executable) l.provider = "prov-" + std::to_string(pick(rng, 50));
    p.partner_links.push_back(l);
  }
  for (std::size_t i = 0; i < 1 + pick(rng, 5); ++i) p.variables.push_back("var" + std::to_string(i));
  BpelGen g{rng, {}, p.variables};
  for (const auto& l : p.partner_links) g.links.push_back(l.name);
  p.body = g.activity(4);
  return p;
}

/// Well-formed trace over `tasks`: every start is later matched by an end
/// unless the trace faults.
inline ExecutionTrace gen_trace(Rng& rng, const std::vector<std::string>& tasks) {
  ExecutionTrace t;
  std::int64_t tick = 0;
  std::vector<std::string> open;
  const auto steps = pick(rng, 14);
  for (std::size_t i = 0; i < steps; ++i) {
    tick += static_cast<std::int64_t>(pick(rng, 2));
    if (!open.empty() && coin(rng, 45)) {
      const auto k = pick(rng, open.size());
      t.events.push_back({tick, EventKind::task_end, open[k], ""});
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
    } else if (coin(rng, 10)) {
      t.events.push_back({tick, EventKind::rule_eval, "g" + std::to_string(i), "R9 true"});
    } else {
      const auto& name = one_of(rng, tasks);
      t.events.push_back({tick, EventKind::task_start, name, ""});
      open.push_back(name);
    }
  }
  if (coin(rng, 20)) {
    t.events.push_back({tick, EventKind::fault_raised, "F", ""});
    t.status = TraceStatus::faulted;
  } else {
    for (const auto& name : open) t.events.push_back({++tick, EventKind::task_end, name, ""});
  }
  return t;
}

}  // namespace brain::testing
