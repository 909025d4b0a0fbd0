// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brain/expr.hpp"

namespace brain {

/// Branch guard of an exclusive choice, tagged with the rule it came from.
struct Guard {
  std::string rule;
  Expr condition;

  bool operator==(const Guard&) const = default;
};

/// Structured (series-parallel) process fragment: the tree form of a
/// WorkflowGraph. Gateway ids are carried so that a graph decomposed and
/// re-emitted keeps its node names.
struct Fragment {
  enum class Kind { task, sequence, parallel, choice, loop, fault, empty };

  Kind kind = Kind::empty;
  std::string name;      // task id or fault node id
  std::string split_id;  // parallel / choice / loop
  std::string join_id;
  std::vector<Fragment> children;
  /// choice: one entry per branch, nullopt marks the default (last) branch.
  /// loop: exactly one entry, the continuation guard.
  std::vector<std::optional<Guard>> guards;

  static Fragment task(std::string id);
  static Fragment fault(std::string id);
  static Fragment empty() { return {}; }
  /// Flattens nested sequences and drops empty parts; a single remaining
  /// part is returned as is.
  static Fragment sequence(std::vector<Fragment> parts);
  static Fragment parallel(std::string split, std::string join, std::vector<Fragment> branches);
  static Fragment choice(std::string split, std::string join, std::vector<Fragment> branches,
                         std::vector<std::optional<Guard>> guards);

  /// Task ids in document order.
  std::vector<std::string> tasks() const;

  bool operator==(const Fragment&) const = default;
};

enum class PatternKind { sequence, and_split_join, xor_split_join, loop };
std::string_view pattern_name(PatternKind k) noexcept;

/// Control-flow template from the pattern repository.
struct PatternTemplate {
  PatternKind kind = PatternKind::sequence;
  /// xor_split_join: one guard per branch except an optional default last branch.
  std::vector<std::optional<Guard>> branch_guards;
  /// loop: continuation guard.
  std::optional<Guard> loop_guard;

  /// Throws Error(schema_violation) when the template breaks its invariants.
  void validate() const;

  /// Fills the template. Gateway ids are `prefix + ".split"` / `prefix + ".join"`.
  Fragment instantiate(std::vector<Fragment> parts, const std::string& prefix) const;
};

/// Named store of workflow pattern templates. The default instance holds
/// one template per kind; guards are supplied per instantiation.
class PatternRepository {
 public:
  PatternRepository();

  const PatternTemplate& get(PatternKind kind) const;
  PatternTemplate xor_with(std::vector<std::optional<Guard>> guards) const;
  PatternTemplate loop_with(Guard guard) const;

 private:
  std::map<PatternKind, PatternTemplate> templates_;
};

}  // namespace brain
