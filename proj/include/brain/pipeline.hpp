// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "brain/bpel.hpp"
#include "brain/composer.hpp"
#include "brain/goals.hpp"
#include "brain/registry.hpp"
#include "brain/rule_repository.hpp"
#include "brain/runtime.hpp"

namespace brain {

/// Steps shared by the CLI and the HTTP sessions so both produce the same
/// artifacts from the same inputs.

struct Fixtures {
  GoalModel goals;
  RuleRepository rules;
  Registry registry;
  Mocks mocks;
};

/// Reads goals.xml, rules/*.xml, providers.xml and mocks.xml.
Fixtures load_fixtures(const std::filesystem::path& dir);

std::vector<BehaviorRule> behavior_rules(const RuleRepository& repo);
std::vector<ConstraintRule> constraint_rules(const RuleRepository& repo);
std::vector<DiscoveryRule> discovery_rules(const RuleRepository& repo);

struct Analysis {
  Selection selection;
  /// Behavior rules whose two tasks are both selected.
  std::vector<BehaviorRule> behavior;
  DependencyGraph dependencies;
};

Analysis analyze(const GoalModel& model, const RuleRepository& repo, const std::vector<std::string>& goal_ids);

/// Exclusive groups take their guards from the constraint rules on the
/// selected tasks.
WorkflowGraph synthesize(const Analysis& analysis, const RuleRepository& repo);

/// Constraint rules on selected tasks that were not consumed as guards.
std::vector<std::string> default_constraint_ids(const Analysis& analysis, const RuleRepository& repo);

/// Errors: not_found, schema_violation (id names a non-constraint rule),
/// plus those of attach_constraints.
WorkflowGraph apply_constraints(const WorkflowGraph& wf, const RuleRepository& repo,
                                const std::vector<std::string>& rule_ids);

BpelProcess abstract_process(const WorkflowGraph& wf, const GoalModel& model, const std::string& name);

/// Providers of the link's family that satisfy the discovery rules of every
/// task on that link. Errors: unknown_partner_link.
std::vector<Provider> proposals(const BpelProcess& process, const std::string& link,
                                const std::vector<DiscoveryRule>& rules, const Registry& registry);

/// Binds the given links and every other unbound link to its first proposal.
/// Errors: no_provider_found plus those of bind_partners.
BpelProcess bind_with_defaults(const BpelProcess& process, const std::map<std::string, std::string>& chosen,
                               const std::vector<DiscoveryRule>& rules, const Registry& registry);

struct Simulation {
  ExecutionTrace trace;
  std::vector<Violation> violations;
};

Simulation simulate(const BpelProcess& process, const Mocks& mocks, const Env& env, std::uint64_t seed,
                    const std::vector<BehaviorRule>& rules);

}  // namespace brain
