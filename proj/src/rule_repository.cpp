// SPDX-License-Identifier: Apache-2.0
#include "brain/rule_repository.hpp"

#include <algorithm>
#include <mutex>

#include "brain/error.hpp"
#include "brain/io.hpp"

namespace brain {

RuleRepository::RuleRepository(const RuleRepository& other) {
  std::shared_lock lock(other.mutex_);
  rules_ = other.rules_;
  by_kind_ = other.by_kind_;
  by_task_ = other.by_task_;
}

RuleRepository& RuleRepository::operator=(const RuleRepository& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_);
  std::shared_lock other_lock(other.mutex_);
  rules_ = other.rules_;
  by_kind_ = other.by_kind_;
  by_task_ = other.by_task_;
  return *this;
}

void RuleRepository::index_locked(const Rule& rule) {
  const auto& id = rule_id(rule);
  by_kind_[rule_kind(rule)].insert(id);
  for (const auto& t : rule_tasks(rule)) by_task_[t].insert(id);
}

void RuleRepository::unindex_locked(const Rule& rule) {
  const auto& id = rule_id(rule);
  auto drop = [&](auto& index, const auto& key) {
    auto it = index.find(key);
    if (it == index.end()) return;
    it->second.erase(id);
    if (it->second.empty()) index.erase(it);
  };
  drop(by_kind_, rule_kind(rule));
  for (const auto& t : rule_tasks(rule)) drop(by_task_, t);
}

void RuleRepository::put(Rule rule) {
  validate_rule(rule);
  std::unique_lock lock(mutex_);
  const auto id = rule_id(rule);
  if (rules_.contains(id)) throw Error(Errc::duplicate_id, id);
  index_locked(rule);
  rules_.emplace(id, std::move(rule));
}

Rule RuleRepository::get(const std::string& id) const {
  if (auto r = find(id)) return std::move(*r);
  throw Error(Errc::not_found, id, "no such rule");
}

std::optional<Rule> RuleRepository::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = rules_.find(id);
  if (it == rules_.end()) return std::nullopt;
  return it->second;
}

bool RuleRepository::erase(const std::string& id) {
  std::unique_lock lock(mutex_);
  auto it = rules_.find(id);
  if (it == rules_.end()) return false;
  unindex_locked(it->second);
  rules_.erase(it);
  return true;
}

std::vector<Rule> RuleRepository::query(const RuleQuery& q) const {
  std::shared_lock lock(mutex_);
  static const std::set<std::string> none;
  const std::set<std::string>* by_kind = nullptr;
  const std::set<std::string>* by_task = nullptr;
  if (q.kind) {
    auto it = by_kind_.find(*q.kind);
    by_kind = it == by_kind_.end() ? &none : &it->second;
  }
  if (q.task) {
    auto it = by_task_.find(*q.task);
    by_task = it == by_task_.end() ? &none : &it->second;
  }

  std::vector<Rule> out;
  auto emit = [&](const std::string& id) { out.push_back(rules_.at(id)); };
  if (by_kind && by_task) {
    std::vector<std::string> ids;
    std::set_intersection(by_kind->begin(), by_kind->end(), by_task->begin(), by_task->end(),
                          std::back_inserter(ids));
    for (const auto& id : ids) emit(id);
  } else if (by_kind || by_task) {
    for (const auto& id : by_kind ? *by_kind : *by_task) emit(id);
  } else {
    for (const auto& [id, r] : rules_) out.push_back(r);
  }
  return out;
}

std::size_t RuleRepository::size() const {
  std::shared_lock lock(mutex_);
  return rules_.size();
}

bool RuleRepository::indexes_consistent() const {
  std::shared_lock lock(mutex_);
  std::map<RuleKind, std::set<std::string>> kinds;
  std::map<std::string, std::set<std::string>> tasks;
  for (const auto& [id, r] : rules_) {
    kinds[rule_kind(r)].insert(id);
    for (const auto& t : rule_tasks(r)) tasks[t].insert(id);
  }
  return kinds == by_kind_ && tasks == by_task_;
}

RuleRepository load_rule_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::not_found, dir.string(), "not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  RuleRepository repo;
  for (const auto& f : files) {
    for (auto& r : parse_rules(read_file(f))) repo.put(std::move(r));
  }
  return repo;
}

}  // namespace brain
