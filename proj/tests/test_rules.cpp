// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "brain/error.hpp"
#include "brain/rules.hpp"
#include "support/gen.hpp"
#include "support/paths.hpp"

using namespace brain;
using namespace brain::testing;

namespace {

Errc code_of(std::string_view text) {
  try {
    parse_rule(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::xml_syntax;
}

}  // namespace

TEST_CASE("booking precedes payment") {
  const auto r = parse_rule(R"(<rule id="R1" kind="behavior"><precedence antecedent="Booking" consequent="Payment"/></rule>)");
  REQUIRE(std::holds_alternative<BehaviorRule>(r));
  const auto& b = std::get<BehaviorRule>(r);
  CHECK(b.id == "R1");
  CHECK(b.relation == BehaviorRelation::precedence);
  CHECK(b.antecedent == "Booking");
  CHECK(b.consequent == "Payment");
  CHECK(serialize_rule(r) == golden("r1.xml"));
}

TEST_CASE("unknown kind is rejected") { CHECK(code_of(R"(<rule id="X" kind="weird"/>)") == Errc::unknown_rule_kind); }

TEST_CASE("credit check rule serializes to its golden file") {
  ConstraintRule r2;
  r2.id = "R2";
  r2.task = "TaxPaymentRequest";
  r2.mode = ConstraintMode::post;
  r2.condition = Expr::compare(CmpOp::ge, Expr::var("citizen.accountBalance"), Expr::var("tax.amount"));
  r2.on_false = OnFalse::fault();
  CHECK(serialize_rule(r2) == golden("r2.xml"));
  CHECK(parse_rule(golden("r2.xml")) == Rule(r2));
}

TEST_CASE("schema errors") {
  CHECK(code_of("<rule id=\"a\" kind=\"behavior\"><precedence antecedent=\"A\"/></rule>") == Errc::missing_attribute);
  CHECK(code_of("<rule kind=\"behavior\"/>") == Errc::missing_attribute);
  CHECK(code_of("<rule id=\"a\" kind=\"behavior\" extra=\"1\"><precedence antecedent=\"A\" consequent=\"B\"/></rule>") ==
        Errc::schema_violation);
  CHECK(code_of("<rule id=\"a\" kind=\"behavior\"><before antecedent=\"A\" consequent=\"B\"/></rule>") ==
        Errc::schema_violation);
  CHECK(code_of("<rule id=\"a\" kind=\"behavior\"><precedence antecedent=\"A\" consequent=\"A\"/></rule>") ==
        Errc::schema_violation);
  CHECK(code_of("<rule id=\"c\" kind=\"constraint\" task=\"T\" mode=\"post\" onFalse=\"reroute\">"
                "<condition><const type=\"bool\">true</const></condition></rule>") == Errc::missing_attribute);
  CHECK(code_of("<rule id=\"c\" kind=\"constraint\" task=\"T\" mode=\"during\" onFalse=\"fault\">"
                "<condition><const type=\"bool\">true</const></condition></rule>") == Errc::schema_violation);
  CHECK(code_of("<rule id=\"c\" kind=\"constraint\" task=\"T\" mode=\"pre\" onFalse=\"fault\">"
                "<condition><const type=\"num\">1</const></condition></rule>") == Errc::malformed_expr);
  CHECK(code_of("<rule id=\"d\" kind=\"discovery\" task=\"T\"><predicate><bogus/></predicate></rule>") ==
        Errc::malformed_expr);
  CHECK(code_of("<rule id=\"d\" kind=\"discovery\" task=\"T\"") == Errc::xml_syntax);
}

TEST_CASE("parse of serialize is identity on 200 generated rules") {
  Rng rng(4242);
  const auto tasks = task_names(6);
  int kinds[3] = {0, 0, 0};
  for (int i = 0; i < 200; ++i) {
    const auto r = gen_rule(rng, "G" + std::to_string(i), tasks);
    ++kinds[static_cast<int>(rule_kind(r))];
    const auto text = serialize_rule(r);
    const auto back = parse_rule(text);
    CHECK(back == r);
    CHECK(serialize_rule(back) == text);
  }
  CHECK(kinds[0] > 0);
  CHECK(kinds[1] > 0);
  CHECK(kinds[2] > 0);
}

TEST_CASE("rule lists round trip") {
  Rng rng(5);
  std::vector<Rule> rules;
  for (int i = 0; i < 10; ++i) rules.push_back(gen_rule(rng, "L" + std::to_string(i), task_names(4)));
  CHECK(parse_rules(serialize_rules(rules)) == rules);
}

TEST_CASE("serialize of parse is byte-exact on every fixture rule") {
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(fixtures_dir() / "rules")) {
    const auto text = read_file(entry.path());
    CHECK(serialize_rule(parse_rule(text)) == text);
    ++files;
  }
  CHECK(files == 8);
}

TEST_CASE("rule_tasks") {
  CHECK(rule_tasks(BehaviorRule{"b", BehaviorRelation::response, "A", "B"}) == std::vector<std::string>{"A", "B"});
  ConstraintRule c{"c", "A", ConstraintMode::pre, Expr::constant(true), OnFalse::reroute("B")};
  CHECK(rule_tasks(c) == std::vector<std::string>{"A"});
}
