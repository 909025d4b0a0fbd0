// SPDX-License-Identifier: Apache-2.0
#include "brain/server/session.hpp"

namespace brain::server {

std::string_view stage_name(Stage s) noexcept {
  switch (s) {
    case Stage::goals: return "goals";
    case Stage::workflow: return "workflow";
    case Stage::schema: return "schema";
    case Stage::instance: return "instance";
  }
  return "?";
}

const Analysis& Session::select(const GoalModel& model, const RuleRepository& repo,
                                std::vector<std::string> goal_ids) {
  auto analysis = analyze(model, repo, goal_ids);
  goals_ = std::move(goal_ids);
  analysis_ = std::move(analysis);
  workflow_.reset();
  annotated_.reset();
  abstract_.reset();
  bound_.reset();
  stage_ = Stage::workflow;
  return *analysis_;
}

const WorkflowGraph& Session::synthesize(const RuleRepository& repo) {
  if (!analysis_) throw StageOrder("synthesize requires a goal selection");
  workflow_ = brain::synthesize(*analysis_, repo);
  annotated_.reset();
  abstract_.reset();
  bound_.reset();
  stage_ = Stage::schema;
  return *workflow_;
}

const BpelProcess& Session::constrain(const GoalModel& model, const RuleRepository& repo,
                                      const std::vector<std::string>& rule_ids) {
  if (!workflow_) throw StageOrder("constraints require a synthesized workflow");
  auto annotated = apply_constraints(*workflow_, repo, rule_ids);
  auto process = brain::abstract_process(annotated, model, goals_.front());
  annotated_ = std::move(annotated);
  abstract_ = std::move(process);
  bound_.reset();
  stage_ = Stage::schema;
  return *abstract_;
}

const BpelProcess& Session::ensure_abstract(const GoalModel& model) {
  if (!workflow_) throw StageOrder("binding requires a synthesized workflow");
  if (!abstract_) {
    annotated_ = workflow_;
    abstract_ = brain::abstract_process(*annotated_, model, goals_.front());
  }
  return *abstract_;
}

std::vector<Provider> Session::proposals(const GoalModel& model, const RuleRepository& repo,
                                         const Registry& registry, const std::string& link) {
  return brain::proposals(ensure_abstract(model), link, discovery_rules(repo), registry);
}

const BpelProcess& Session::bind(const GoalModel& model, const RuleRepository& repo, const Registry& registry,
                                 const std::map<std::string, std::string>& chosen) {
  auto process = bind_with_defaults(ensure_abstract(model), chosen, discovery_rules(repo), registry);
  bound_ = std::move(process);
  stage_ = Stage::instance;
  return *bound_;
}

Simulation Session::simulate(const Mocks& mocks, const Env& env, std::uint64_t seed) const {
  if (!bound_) throw StageOrder("simulate requires a bound process");
  return brain::simulate(*bound_, mocks, env, seed, analysis_->behavior);
}

std::shared_ptr<Session> SessionStore::create() {
  std::unique_lock lock(mutex_);
  auto id = "s" + std::to_string(next_++);
  auto s = std::make_shared<Session>(id);
  sessions_.emplace(id, s);
  return s;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

}  // namespace brain::server
