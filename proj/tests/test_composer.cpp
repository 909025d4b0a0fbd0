// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "brain/composer.hpp"
#include "brain/error.hpp"
#include "brain/pipeline.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"
#include "support/soundness.hpp"

using namespace brain;
using namespace brain::testing;

namespace {

BehaviorRule prec(std::string id, std::string a, std::string b) {
  return {std::move(id), BehaviorRelation::precedence, std::move(a), std::move(b)};
}

Errc build_error(const std::vector<std::string>& tasks, const std::vector<BehaviorRule>& rules,
                 std::vector<std::string>* subjects = nullptr) {
  try {
    build_dependency_graph(tasks, {}, rules);
  } catch (const Error& e) {
    if (subjects) *subjects = e.subjects();
    return e.code();
  }
  FAIL("no error raised");
  return Errc::xml_syntax;
}

std::vector<Task> plain_tasks(const std::vector<std::string>& ids) {
  std::vector<Task> out;
  for (const auto& id : ids) out.push_back(Task{id, id, "op" + id, {}, {}, "P"});
  return out;
}

ConstraintRule guard(std::string id, std::string task, std::string var) {
  return {std::move(id), std::move(task), ConstraintMode::pre,
          Expr::compare(CmpOp::eq, Expr::var(std::move(var)), Expr::constant(true)), OnFalse::skip()};
}

BpelProcess executable(const WorkflowGraph& wf, const std::vector<Task>& tasks) {
  auto p = graph_to_bpel(wf, tasks, "P");
  for (auto& l : p.partner_links) l.provider = "prov";
  p.executable = true;
  return p;
}

Mocks mocks_for(const std::vector<Task>& tasks) {
  MockEndpoint ep{"prov", {}};
  for (const auto& t : tasks) ep.operations[t.operation] = MockResponse{};
  return {{"prov", ep}};
}

}  // namespace

TEST_CASE("booking then payment") {
  const auto dep = build_dependency_graph(std::vector<std::string>{"Booking", "Payment"}, {},
                                          {prec("R1", "Booking", "Payment")});
  CHECK(dep.precedence == std::set<TaskPair>{{"Booking", "Payment"}});
  const auto wf = synthesize_workflow(dep);
  CHECK(decompose_workflow(wf) == Fragment::sequence({Fragment::task("Booking"), Fragment::task("Payment")}));
  CHECK(wf.entry == "Booking");
  CHECK(wf.exit == "Payment");
}

TEST_CASE("two unrelated tasks run in parallel") {
  const auto dep = build_dependency_graph(std::vector<std::string>{"A", "B"}, {}, {});
  const auto wf = synthesize_workflow(dep);
  CHECK(decompose_workflow(wf) ==
        Fragment::parallel("L0.and.split", "L0.and.join", {Fragment::task("A"), Fragment::task("B")}));
  CHECK(workflow_violations(wf).empty());
}

TEST_CASE("diamond") {
  const std::vector<std::string> ids = {"A", "B", "C", "D"};
  const std::vector<BehaviorRule> rules = {prec("r1", "A", "B"), prec("r2", "A", "C"), prec("r3", "B", "D"),
                                           prec("r4", "C", "D")};
  const auto dep = build_dependency_graph(ids, {}, rules);
  const auto wf = synthesize_workflow(dep);
  CHECK(decompose_workflow(wf) ==
        Fragment::sequence({Fragment::task("A"),
                            Fragment::parallel("L1.and.split", "L1.and.join", {Fragment::task("B"), Fragment::task("C")}),
                            Fragment::task("D")}));
  const auto tasks = plain_tasks(ids);
  const auto traces = enumerate_schedules(executable(wf, tasks), mocks_for(tasks), {});
  CHECK(traces.size() == count_linear_extensions(ids, dep.ordering()));
  CHECK(traces.size() == 2);
  for (const auto& t : traces) CHECK(check_conformance(t, rules).empty());
}

TEST_CASE("two-cycle") {
  std::vector<std::string> subjects;
  CHECK(build_error({"A", "B"}, {prec("p", "A", "B"), prec("q", "B", "A")}, &subjects) == Errc::cyclic_rules);
  CHECK(subjects == std::vector<std::string>{"A", "B", "A"});
}

TEST_CASE("implied pairs count as edges") {
  std::vector<std::string> ids = {"A", "B"};
  CHECK_THROWS_WITH_AS(build_dependency_graph(ids, {{"A", "B"}}, {prec("p", "B", "A")}),
                       doctest::Contains("CyclicRules"), Error);
}

TEST_CASE("rules must reference selected tasks") {
  CHECK(build_error({"A"}, {prec("p", "A", "Ghost")}) == Errc::dangling_rule_ref);
}

TEST_CASE("cycle verdict agrees with the permutation oracle") {
  Rng rng(8128);
  int cyclic = 0;
  for (int round = 0; round < 400; ++round) {
    const auto n = 2 + pick(rng, 5);
    const auto ids = task_names(n);
    std::vector<BehaviorRule> rules;
    std::set<std::pair<std::string, std::string>> edges;
    for (std::size_t k = pick(rng, 2 * n); k > 0; --k) {
      const auto a = one_of(rng, ids);
      const auto b = one_of(rng, ids);
      if (a == b) continue;
      rules.push_back({"r" + std::to_string(rules.size()),
                       coin(rng) ? BehaviorRelation::precedence : BehaviorRelation::response, a, b});
      edges.insert({a, b});
    }
    const bool orderable = has_total_order(ids, edges);
    std::vector<std::string> cycle;
    bool threw = false;
    try {
      build_dependency_graph(ids, {}, rules);
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::cyclic_rules);
      threw = true;
      cycle = e.subjects();
    }
    CHECK(threw == !orderable);
    if (threw) {
      ++cyclic;
      REQUIRE(cycle.size() >= 3);
      CHECK(cycle.front() == cycle.back());
      for (std::size_t i = 0; i + 1 < cycle.size(); ++i) CHECK(edges.contains({cycle[i], cycle[i + 1]}));
    }
  }
  CHECK(cyclic > 0);
}

TEST_CASE("exclusive conflicts") {
  const std::vector<std::string> ids = {"A", "B", "C"};
  const BehaviorRule x{"x", BehaviorRelation::exclusive, "A", "B"};
  CHECK(build_error(ids, {x, prec("p", "A", "B")}) == Errc::exclusive_conflict);
  CHECK(build_error(ids, {x, prec("p", "A", "C")}) == Errc::exclusive_conflict);
  CHECK(build_error(ids, {x, {"r", BehaviorRelation::response, "C", "B"}}) == Errc::exclusive_conflict);
  CHECK(build_error(ids, {x, {"r", BehaviorRelation::response, "A", "C"}, prec("p", "C", "B")}) ==
        Errc::exclusive_conflict);
  CHECK(build_error(ids, {x, prec("p", "C", "A"), {"r", BehaviorRelation::response, "B", "C"}}) ==
        Errc::exclusive_conflict);
  CHECK_NOTHROW(build_dependency_graph(ids, {}, {x, prec("p", "C", "A"), prec("q", "C", "B")}));
}

TEST_CASE("exclusive pairs need guards") {
  const std::vector<std::string> ids = {"A", "B"};
  const auto dep = build_dependency_graph(ids, {}, {{"x", BehaviorRelation::exclusive, "A", "B"}});
  CHECK_THROWS_WITH_AS(synthesize_workflow(dep), doctest::Contains("MissingGuard"), Error);
  CHECK_THROWS_WITH_AS(synthesize_workflow(dep, {guard("ga", "A", "a")}), doctest::Contains("MissingGuard"), Error);
  const auto wf = synthesize_workflow(dep, {guard("gb", "B", "b"), guard("ga", "A", "a")});
  const auto* split = wf.find("L0.xor0.split");
  REQUIRE(split != nullptr);
  CHECK(split->kind == NodeKind::xor_split);
  REQUIRE(split->guards.size() == 2);
  CHECK(split->guards[0]->rule == "ga");
  CHECK(split->guards[1]->rule == "gb");
  CHECK(guard_rule_ids(dep, {guard("gb", "B", "b"), guard("ga", "A", "a"), guard("ga2", "A", "z")}) ==
        std::set<std::string>{"ga", "gb"});
}

TEST_CASE("synthesis is deterministic and complete") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto c = gen_composition_case(rng);
    const auto dep = build_dependency_graph(c.tasks, {}, c.behavior);
    const auto a = synthesize_workflow(dep, c.guards);
    const auto b = synthesize_workflow(dep, c.guards);
    CHECK(a == b);
    CHECK(workflow_violations(a).empty());
    auto nodes = a.task_nodes();
    std::sort(nodes.begin(), nodes.end());
    auto expected = dep.vertices;
    std::sort(expected.begin(), expected.end());
    CHECK(nodes == expected);
    std::set<std::string> levelled;
    std::size_t count = 0;
    for (const auto& level : task_levels(dep)) {
      levelled.insert(level.begin(), level.end());
      count += level.size();
    }
    CHECK(count == dep.vertices.size());
    CHECK(levelled.size() == dep.vertices.size());
  }
}

TEST_CASE("credit check becomes a decision after the request") {
  const auto f = load_fixtures(fixtures_dir());
  const auto analysis = analyze(f.goals, f.rules, {"TaxPayment"});
  const auto wf = synthesize(analysis, f.rules);
  const auto r2 = std::get<ConstraintRule>(f.rules.get("R2"));
  const auto annotated = attach_constraints(wf, {r2});
  CHECK(workflow_violations(annotated).empty());
  const auto* split = annotated.find("R2.split");
  REQUIRE(split != nullptr);
  CHECK(split->kind == NodeKind::xor_split);
  REQUIRE(split->guards.size() == 2);
  CHECK(split->guards[0] == Guard{"R2", r2.condition});
  CHECK_FALSE(split->guards[1].has_value());
  CHECK(std::count(annotated.edges.begin(), annotated.edges.end(), WorkflowEdge{"TaxPaymentRequest", "R2.split"}) == 1);
  const auto* fault = annotated.find("R2.fault");
  REQUIRE(fault != nullptr);
  CHECK(fault->kind == NodeKind::fault);
  CHECK(annotated.task_nodes() == wf.task_nodes());
}

TEST_CASE("no constraint rules leaves the graph alone") {
  const auto dep = build_dependency_graph(std::vector<std::string>{"A", "B", "C"}, {}, {prec("p", "A", "B")});
  const auto wf = synthesize_workflow(dep);
  CHECK(attach_constraints(wf, {}) == wf);
}

TEST_CASE("constraint attachment errors") {
  const std::vector<std::string> ids = {"A", "B", "C", "D"};
  const auto dep = build_dependency_graph(ids, {}, {prec("p", "A", "B"), prec("q", "B", "C"), prec("r", "A", "D")});
  const auto wf = synthesize_workflow(dep);
  auto rule = [](std::string task, OnFalse on_false, ConstraintMode mode = ConstraintMode::post) {
    return ConstraintRule{"K", std::move(task), mode, Expr::var("ok"), std::move(on_false)};
  };
  auto code = [&](const std::vector<ConstraintRule>& rules) {
    try {
      attach_constraints(wf, rules);
    } catch (const Error& e) {
      return e.name();
    }
    return std::string_view("none");
  };
  CHECK(code({rule("Ghost", OnFalse::fault())}) == "UnknownAttachedTask");
  CHECK(code({rule("A", OnFalse::reroute("Ghost"))}) == "UnknownRerouteTarget");
  CHECK(code({rule("C", OnFalse::reroute("A"))}) == "BackwardReroute");
  CHECK(code({rule("B", OnFalse::reroute("D"))}) == "UnstructuredReroute");
  CHECK(code({rule("A", OnFalse::fault()), rule("B", OnFalse::fault())}) == "DuplicateId");
  CHECK(code({rule("A", OnFalse::reroute("C"))}) == "none");
  CHECK(code({rule("A", OnFalse::reroute("C"), ConstraintMode::pre)}) == "none");
  CHECK(code({rule("B", OnFalse::reroute("C"), ConstraintMode::pre)}) == "UnstructuredReroute");
}

TEST_CASE("fault constraints preserve graph invariants on 200 random workflows") {
  Rng rng(200);
  for (int i = 0; i < 200; ++i) {
    const auto c = gen_composition_case(rng);
    const auto wf = synthesize_workflow(build_dependency_graph(c.tasks, {}, c.behavior), c.guards);
    std::vector<ConstraintRule> rules;
    for (std::size_t k = 1 + pick(rng, 4); k > 0; --k) {
      rules.push_back({"C" + std::to_string(rules.size()), one_of(rng, c.tasks).id,
                       coin(rng) ? ConstraintMode::pre : ConstraintMode::post, gen_expr(rng, 2), OnFalse::fault()});
    }
    const auto annotated = attach_constraints(wf, rules);
    CHECK(workflow_violations(annotated).empty());
    CHECK(annotated.task_nodes() == wf.task_nodes());
    for (const auto& r : rules) {
      REQUIRE(annotated.find(r.id + ".fault") != nullptr);
      CHECK(annotated.find(r.id + ".split")->kind == NodeKind::xor_split);
    }
    CHECK(decompose_workflow(emit_workflow(decompose_workflow(annotated))) == decompose_workflow(annotated));
  }
}

TEST_CASE("schedules of generated processes conform") {
  const auto report = run_soundness(12345, 150);
  CHECK(report.cases == 150);
  CHECK(report.traces >= report.cases);
  CHECK(report.violating_traces == 0);
  CHECK(report.incomplete_traces == 0);
  CHECK(report.missing_tasks == 0);
}
