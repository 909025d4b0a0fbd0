// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "brain/pipeline.hpp"

namespace brain::server {

enum class Stage { goals, workflow, schema, instance };
std::string_view stage_name(Stage s) noexcept;

/// Raised when a step is requested before its prerequisites exist.
struct StageOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One designer walk. Any earlier-stage step discards the artifacts of the
/// later stages.
class Session {
 public:
  explicit Session(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  /// Held by the API for the whole of one request.
  std::mutex& mutex() { return mutex_; }

  Stage stage() const { return stage_; }
  const std::vector<std::string>& selected_goals() const { return goals_; }

  const Analysis& select(const GoalModel& model, const RuleRepository& repo, std::vector<std::string> goal_ids);
  const WorkflowGraph& synthesize(const RuleRepository& repo);
  const BpelProcess& constrain(const GoalModel& model, const RuleRepository& repo,
                               const std::vector<std::string>& rule_ids);
  std::vector<Provider> proposals(const GoalModel& model, const RuleRepository& repo, const Registry& registry,
                                  const std::string& link);
  const BpelProcess& bind(const GoalModel& model, const RuleRepository& repo, const Registry& registry,
                          const std::map<std::string, std::string>& chosen);
  Simulation simulate(const Mocks& mocks, const Env& env, std::uint64_t seed) const;

  const std::optional<Analysis>& analysis() const { return analysis_; }
  const std::optional<WorkflowGraph>& workflow() const { return workflow_; }
  const std::optional<WorkflowGraph>& annotated() const { return annotated_; }
  const std::optional<BpelProcess>& abstract_process() const { return abstract_; }
  const std::optional<BpelProcess>& bound_process() const { return bound_; }

 private:
  const BpelProcess& ensure_abstract(const GoalModel& model);

  std::string id_;
  std::mutex mutex_;
  Stage stage_ = Stage::goals;
  std::vector<std::string> goals_;
  std::optional<Analysis> analysis_;
  std::optional<WorkflowGraph> workflow_;
  std::optional<WorkflowGraph> annotated_;
  std::optional<BpelProcess> abstract_;
  std::optional<BpelProcess> bound_;
};

class SessionStore {
 public:
  std::shared_ptr<Session> create();
  std::shared_ptr<Session> find(const std::string& id) const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_ = 1;
};

}  // namespace brain::server
