// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "brain/expr.hpp"
#include "brain/rules.hpp"

namespace brain {

struct Provider {
  std::string id;
  std::string family;
  Env attributes;
  std::string endpoint;  // opaque

  bool operator==(const Provider&) const = default;
};

/// Service registry: providers keyed by id, indexed by family. Same locking
/// contract as RuleRepository.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry& other);
  Registry& operator=(const Registry& other);

  /// Throws Error(duplicate_provider); Error(schema_violation) for an empty id or family.
  void add(Provider provider);
  std::optional<Provider> find(std::string_view id) const;
  /// Throws Error(unknown_provider).
  Provider get(std::string_view id) const;

  /// All providers ordered by (family, id).
  std::vector<Provider> providers() const;
  std::vector<Provider> family(std::string_view family) const;
  std::set<std::string> families() const;
  std::size_t size() const;

  bool index_consistent() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, Provider, std::less<>> providers_;
  std::map<std::string, std::set<std::string>, std::less<>> by_family_;
};

inline void register_provider(Registry& reg, Provider provider) { reg.add(std::move(provider)); }

/// Providers satisfying every discovery rule for `task` (rules for other
/// tasks are ignored): family matches when the rule names one and the
/// predicate holds over the provider attributes. Ordered by (family, id).
/// With no applicable rule every provider is proposed. May be empty.
std::vector<Provider> discover(const Registry& reg, std::string_view task, const std::vector<DiscoveryRule>& rules);

/// <providers><provider id family endpoint><attr path type>v</attr>...</provider>...</providers>
Registry load_providers(std::string_view xml_text);
std::string serialize_providers(const Registry& reg);

}  // namespace brain
