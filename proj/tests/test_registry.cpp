// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <thread>

#include "brain/error.hpp"
#include "brain/pipeline.hpp"
#include "brain/registry.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace brain;
using namespace brain::testing;

namespace {

std::vector<std::string> ids(const std::vector<Provider>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.id);
  return out;
}

Provider fi(std::string id, double hours) {
  return Provider{std::move(id), "FinancialInstitution", {{"fulfillmentHours", hours}}, ""};
}


}  // namespace

TEST_CASE("registered provider is readable") {
  Registry reg;
  register_provider(reg, fi("FI-Alpha", 1));
  const auto p = reg.find("FI-Alpha");
  REQUIRE(p.has_value());
  CHECK(p->family == "FinancialInstitution");
  CHECK(reg.get("FI-Alpha") == *p);
  CHECK(reg.index_consistent());
}

TEST_CASE("family index") {
  Registry reg;
  register_provider(reg, fi("A", 1));
  register_provider(reg, fi("B", 2));
  register_provider(reg, fi("C", 3));
  register_provider(reg, Provider{"X", "Other", {}, ""});
  CHECK(reg.family("FinancialInstitution").size() == 3);
  CHECK(reg.families() == std::set<std::string>{"FinancialInstitution", "Other"});
  CHECK(reg.index_consistent());
}

TEST_CASE("duplicate and malformed providers") {
  Registry reg;
  register_provider(reg, fi("A", 1));
  try {
    register_provider(reg, fi("A", 2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::duplicate_provider);
  }
  CHECK(reg.get("A").attributes.at("fulfillmentHours") == Scalar(1.0));
  CHECK_THROWS_AS(register_provider(reg, Provider{"", "F", {}, ""}), Error);
  CHECK_THROWS_AS(register_provider(reg, Provider{"B", "", {}, ""}), Error);
  CHECK_THROWS_AS(reg.get("nobody"), Error);
  CHECK(reg.size() == 1);
}

TEST_CASE("discovery filters on fulfillment hours") {
  Registry reg;
  register_provider(reg, fi("Fast", 1));
  register_provider(reg, fi("Slow", 3));
  DiscoveryRule rule{"D", "Pay", "FinancialInstitution",
                     Expr::compare(CmpOp::le, Expr::var("fulfillmentHours"), Expr::constant(2.0))};
  CHECK(ids(discover(reg, "Pay", {rule})) == std::vector<std::string>{"Fast"});
  CHECK(ids(discover(reg, "Other", {rule})) == std::vector<std::string>{"Fast", "Slow"});
  CHECK(discover(Registry{}, "Pay", {rule}).empty());
}

TEST_CASE("discover agrees with a linear filter") {
  Rng rng(77);
  const std::vector<std::string> families = {"F1", "F2", "F3"};
  const std::vector<std::string> tasks = {"T1", "T2"};
  for (int round = 0; round < 100; ++round) {
    Registry reg;
    std::vector<OracleProvider> plain;
    const auto n = pick(rng, 9);
    for (std::size_t i = 0; i < n; ++i) {
      const auto attrs = gen_provider_attributes(rng);
      const auto id = "P" + std::to_string(i);
      const auto& family = one_of(rng, families);
      register_provider(reg, Provider{id, family, attrs, ""});
      plain.push_back({id, family, attrs});
    }
    std::vector<DiscoveryRule> rules;
    std::vector<OracleDiscoveryRule> plain_rules;
    const auto rule_count = pick(rng, 4);
    for (std::size_t i = 0; i < rule_count; ++i) {
      OracleDiscoveryRule r{one_of(rng, tasks), std::nullopt, {}};
      if (coin(rng, 70)) r.family = one_of(rng, families);
      const auto atoms = 1 + pick(rng, 3);
      for (std::size_t k = 0; k < atoms; ++k) r.atoms.push_back(gen_atom(rng));
      rules.push_back(DiscoveryRule{"D" + std::to_string(i), r.task, r.family, atoms_expr(r.atoms)});
      plain_rules.push_back(r);
    }
    for (const auto& t : tasks) {
      CHECK(ids(discover(reg, t, rules)) == discover_oracle(plain, t, plain_rules));
    }
  }
}

TEST_CASE("providers file round trip") {
  const auto text = fixture("providers.xml");
  const auto reg = load_providers(text);
  CHECK(reg.size() == 6);
  CHECK(reg.families().size() == 3);
  for (const auto& f : reg.families()) CHECK(reg.family(f).size() == 2);
  CHECK(serialize_providers(reg) == text);
}

TEST_CASE("concurrent readers and writers keep the index consistent") {
  Registry reg;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&reg, t] {
      for (int i = 0; i < 50; ++i) {
        register_provider(reg, fi("P" + std::to_string(t) + "-" + std::to_string(i), i % 4));
        (void)reg.family("FinancialInstitution");
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(reg.size() == 200);
  CHECK(reg.family("FinancialInstitution").size() == 200);
  CHECK(reg.index_consistent());
}
