// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "brain/rules.hpp"

namespace brain {

struct RuleQuery {
  std::optional<RuleKind> kind;
  std::optional<std::string> task;
};

/// Keyed rule store with secondary indexes by kind and by task id.
///
/// Readers share the lock, writers take it exclusively; every mutation
/// updates the primary map and both indexes under one exclusive section, so
/// a query never observes a half-applied put.
class RuleRepository {
 public:
  RuleRepository() = default;
  RuleRepository(const RuleRepository& other);
  RuleRepository& operator=(const RuleRepository& other);

  /// Throws Error(duplicate_id); validates the rule first.
  void put(Rule rule);
  /// Throws Error(not_found).
  Rule get(const std::string& id) const;
  std::optional<Rule> find(const std::string& id) const;
  /// Returns false when the id was absent.
  bool erase(const std::string& id);

  /// Conjunctive filters, result in id-lexicographic order.
  std::vector<Rule> query(const RuleQuery& q = {}) const;

  std::size_t size() const;

  /// Checks that the indexes agree with the primary store.
  bool indexes_consistent() const;

 private:
  void index_locked(const Rule& rule);
  void unindex_locked(const Rule& rule);

  mutable std::shared_mutex mutex_;
  std::map<std::string, Rule> rules_;
  std::map<RuleKind, std::set<std::string>> by_kind_;
  std::map<std::string, std::set<std::string>> by_task_;
};

/// Loads every *.xml file of a directory (sorted by file name); each file
/// holds one <rule> or a <rules> wrapper.
RuleRepository load_rule_directory(const std::filesystem::path& dir);

}  // namespace brain
