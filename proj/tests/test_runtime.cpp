// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "brain/error.hpp"
#include "brain/io.hpp"
#include "brain/pipeline.hpp"
#include "brain/runtime.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace brain;
using namespace brain::testing;

namespace {

const std::vector<std::string> kTaxOrder = {"TaxPaymentRequest", "SendPaymentInfo", "AuthorizePayment",
                                            "PerformPayment",    "UpdateCitizenStatus", "SendBill"};

struct TaxRun {
  Fixtures f = load_fixtures(fixtures_dir());
  BpelProcess bound = parse_bpel(golden("taxpayment.bound.bpel.xml"));
  Env env(const std::string& name) const { return load_env(fixture("env/" + name + ".xml")); }
};

Activity invoke(const std::string& name) { return InvokeActivity{name, "WPL", "op" + name, {}, {}}; }

BpelProcess process_of(Activity body, const std::vector<std::string>& tasks) {
  BpelProcess p;
  p.name = "P";
  p.executable = true;
  p.partner_links = {PartnerLink{"WPL", "W", "w"}};
  p.body = std::move(body);
  (void)tasks;
  return p;
}

Mocks mocks_for(const std::vector<std::string>& tasks) {
  MockEndpoint ep{"w", {}};
  for (const auto& t : tasks) ep.operations["op" + t] = MockResponse{{}, 1};
  return {{"w", ep}};
}

std::string error_name_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return std::string(e.name());
  }
  return "none";
}

}  // namespace

TEST_CASE("tax payment with sufficient balance completes in order") {
  TaxRun run;
  const auto t = execute(run.bound, run.f.mocks, run.env("sufficient"), 0);
  CHECK(t.status == TraceStatus::completed);
  CHECK(t.task_order() == kTaxOrder);
  CHECK(check_conformance(t, behavior_rules(run.f.rules)).empty());
  CHECK(trace_to_text(t) == golden("taxpayment.sufficient.trace"));
}

TEST_CASE("tax payment with insufficient balance faults at the credit check") {
  TaxRun run;
  const auto t = execute(run.bound, run.f.mocks, run.env("insufficient"), 0);
  CHECK(t.status == TraceStatus::faulted);
  REQUIRE_FALSE(t.events.empty());
  CHECK(t.events.back().kind == EventKind::fault_raised);
  CHECK(t.events.back().subject == "R2.fault");
  CHECK(t.task_order() == std::vector<std::string>{"TaxPaymentRequest"});
  CHECK(trace_to_text(t) == golden("taxpayment.insufficient.trace"));
}

TEST_CASE("execution is deterministic") {
  TaxRun run;
  for (std::uint64_t seed : {0u, 1u, 42u}) {
    CHECK(trace_to_text(execute(run.bound, run.f.mocks, run.env("sufficient"), seed)) ==
          trace_to_text(execute(run.bound, run.f.mocks, run.env("sufficient"), seed)));
  }
}

TEST_CASE("empty body gives an empty completed trace") {
  const auto p = process_of(EmptyActivity{}, {});
  const auto t = execute(p, {}, {}, 0);
  CHECK(t.events.empty());
  CHECK(t.status == TraceStatus::completed);
  CHECK(check_conformance(t, {{"R", BehaviorRelation::precedence, "A", "B"}}).empty());
}

TEST_CASE("preflight errors") {
  auto p = process_of(invoke("A"), {"A"});
  CHECK(error_name_of([&] { execute(p, {}, {}, 0); }) == "MissingMock");
  p.partner_links[0].provider.reset();
  p.executable = false;
  CHECK(error_name_of([&] { execute(p, mocks_for({"A"}), {}, 0); }) == "UnboundLink");
}

TEST_CASE("schedules of a flow and a sequence") {
  const auto flow = process_of(FlowActivity{{invoke("A"), invoke("B")}}, {"A", "B"});
  const auto flow_traces = enumerate_schedules(flow, mocks_for({"A", "B"}), {});
  CHECK(flow_traces.size() == 2);
  std::set<std::vector<std::string>> orders;
  for (const auto& t : flow_traces) orders.insert(t.task_order());
  CHECK(orders == std::set<std::vector<std::string>>{{"A", "B"}, {"B", "A"}});

  const auto seq = process_of(SequenceActivity{{invoke("A"), invoke("B"), invoke("C")}}, {"A", "B", "C"});
  const auto seq_traces = enumerate_schedules(seq, mocks_for({"A", "B", "C"}), {});
  REQUIRE(seq_traces.size() == 1);
  CHECK(seq_traces[0].task_order() == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("enumeration refuses oversized processes") {
  std::vector<std::string> names;
  std::vector<Activity> kids;
  for (int i = 0; i < 9; ++i) {
    names.push_back("T" + std::to_string(i));
    kids.push_back(invoke(names.back()));
  }
  const auto p = process_of(FlowActivity{kids}, names);
  CHECK(error_name_of([&] { enumerate_schedules(p, mocks_for(names), {}); }) == "TooLarge");

  kids.pop_back();
  names.pop_back();
  const auto wide = process_of(FlowActivity{kids}, names);
  ScheduleOptions few;
  few.max_traces = 10;
  CHECK(error_name_of([&] { enumerate_schedules(wide, mocks_for(names), {}, few); }) == "TooLarge");
}

TEST_CASE("every executed trace is an enumerated schedule") {
  const std::vector<std::string> names = {"A", "B", "C", "D"};
  const auto p = process_of(
      SequenceActivity{{invoke("A"), FlowActivity{{invoke("B"), SequenceActivity{{invoke("C"), invoke("D")}}}}}},
      names);
  const auto all = enumerate_schedules(p, mocks_for(names), {});
  std::set<std::string> texts;
  for (const auto& t : all) texts.insert(trace_to_text(t));
  CHECK(all.size() == 3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CHECK(texts.contains(trace_to_text(execute(p, mocks_for(names), {}, seed))));
  }
}

TEST_CASE("conformance examples") {
  ExecutionTrace t;
  t.events = {{0, EventKind::task_start, "B", ""}, {1, EventKind::task_end, "B", ""},
              {1, EventKind::task_start, "A", ""}, {2, EventKind::task_end, "A", ""}};
  const BehaviorRule prec{"P1", BehaviorRelation::precedence, "A", "B"};
  const auto v = check_conformance(t, {prec});
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule_id == "P1");
  CHECK(v[0].positions == std::vector<std::size_t>{0});
  CHECK(format_violation(v[0]).find("P1") != std::string::npos);

  const BehaviorRule resp{"S1", BehaviorRelation::response, "A", "B"};
  CHECK(check_conformance(t, {resp}).size() == 1);
  t.status = TraceStatus::faulted;
  CHECK(check_conformance(t, {resp}).empty());

  const BehaviorRule excl{"X1", BehaviorRelation::exclusive, "A", "B"};
  const auto ex = check_conformance(t, {excl});
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].positions == std::vector<std::size_t>{0, 2});
}

TEST_CASE("conformance agrees with an event scan") {
  Rng rng(4242);
  const std::vector<std::string> tasks = {"A", "B", "C", "D"};
  for (int i = 0; i < 500; ++i) {
    const auto t = gen_trace(rng, tasks);
    std::vector<BehaviorRule> rules;
    for (std::size_t k = 1 + pick(rng, 3); k > 0; --k) {
      const auto a = one_of(rng, tasks);
      auto b = one_of(rng, tasks);
      while (b == a) b = one_of(rng, tasks);
      const auto rel = static_cast<BehaviorRelation>(pick(rng, 3));
      rules.push_back({"R" + std::to_string(k), rel, a, b});
    }
    std::vector<std::pair<std::string, std::vector<std::size_t>>> expected, actual;
    for (const auto& r : rules) {
      auto pos = scan_violations(t, r);
      if (!pos.empty()) expected.emplace_back(r.id, pos);
    }
    for (const auto& v : check_conformance(t, rules)) {
      actual.emplace_back(v.rule_id, v.positions);
      REQUIRE(v.evidence.size() == v.positions.size());
      for (std::size_t k = 0; k < v.positions.size(); ++k) CHECK(v.evidence[k] == t.events[v.positions[k]]);
    }
    CHECK(actual == expected);
  }
}

TEST_CASE("trace text round trip") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto t = gen_trace(rng, {"A", "B", "C"});
    const auto text = trace_to_text(t);
    const auto back = parse_trace_text(text);
    CHECK(back.events == t.events);
    CHECK(back.status == t.status);
    CHECK(trace_to_text(back) == text);
  }
  CHECK(error_name_of([] { parse_trace_text("# status completed\nx taskStart A\n"); }) != "none");
}

TEST_CASE("no events follow a fault") {
  const std::vector<std::string> names = {"A", "B"};
  const auto p = process_of(
      FlowActivity{{SequenceActivity{{invoke("A"), FaultActivity{"boom"}}}, invoke("B")}}, names);
  for (const auto& t : enumerate_schedules(p, mocks_for(names), {})) {
    CHECK(t.status == TraceStatus::faulted);
    CHECK(t.events.back().kind == EventKind::fault_raised);
  }
}

TEST_CASE("mocks and env files round trip") {
  const auto mocks = fixture("mocks.xml");
  CHECK(serialize_mocks(load_mocks(mocks)) == mocks);
  const auto env = fixture("env/sufficient.xml");
  CHECK(serialize_env(load_env(env)) == env);
}

TEST_CASE("if branches record their rule") {
  TaxRun run;
  const auto t = execute(run.bound, run.f.mocks, run.env("sufficient"), 0);
  const auto it = std::find_if(t.events.begin(), t.events.end(),
                               [](const TraceEvent& e) { return e.kind == EventKind::rule_eval; });
  REQUIRE(it != t.events.end());
  CHECK(it->subject == "R2.split");
  CHECK(it->detail == "R2 true");
}
