// SPDX-License-Identifier: Apache-2.0
#include "brain/patterns.hpp"

#include "brain/error.hpp"

namespace brain {

Fragment Fragment::task(std::string id) {
  Fragment f;
  f.kind = Kind::task;
  f.name = std::move(id);
  return f;
}

Fragment Fragment::fault(std::string id) {
  Fragment f;
  f.kind = Kind::fault;
  f.name = std::move(id);
  return f;
}

Fragment Fragment::sequence(std::vector<Fragment> parts) {
  std::vector<Fragment> flat;
  for (auto& p : parts) {
    if (p.kind == Kind::empty) continue;
    if (p.kind == Kind::sequence) {
      for (auto& c : p.children) flat.push_back(std::move(c));
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return empty();
  if (flat.size() == 1) return std::move(flat.front());
  Fragment f;
  f.kind = Kind::sequence;
  f.children = std::move(flat);
  return f;
}

Fragment Fragment::parallel(std::string split, std::string join, std::vector<Fragment> branches) {
  Fragment f;
  f.kind = Kind::parallel;
  f.split_id = std::move(split);
  f.join_id = std::move(join);
  f.children = std::move(branches);
  return f;
}

Fragment Fragment::choice(std::string split, std::string join, std::vector<Fragment> branches,
                          std::vector<std::optional<Guard>> guards) {
  Fragment f;
  f.kind = Kind::choice;
  f.split_id = std::move(split);
  f.join_id = std::move(join);
  f.children = std::move(branches);
  f.guards = std::move(guards);
  return f;
}

std::vector<std::string> Fragment::tasks() const {
  std::vector<std::string> out;
  std::vector<const Fragment*> stack{this};
  while (!stack.empty()) {
    const Fragment* f = stack.back();
    stack.pop_back();
    if (f->kind == Kind::task) out.push_back(f->name);
    for (auto it = f->children.rbegin(); it != f->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

std::string_view pattern_name(PatternKind k) noexcept {
  switch (k) {
    case PatternKind::sequence: return "SEQUENCE";
    case PatternKind::and_split_join: return "AND_SPLIT_JOIN";
    case PatternKind::xor_split_join: return "XOR_SPLIT_JOIN";
    case PatternKind::loop: return "LOOP";
  }
  return "SEQUENCE";
}

void PatternTemplate::validate() const {
  const std::string name(pattern_name(kind));
  switch (kind) {
    case PatternKind::sequence:
    case PatternKind::and_split_join:
      if (!branch_guards.empty() || loop_guard) {
        throw Error(Errc::schema_violation, name, "template takes no guards");
      }
      break;
    case PatternKind::xor_split_join: {
      if (branch_guards.size() < 2) throw Error(Errc::schema_violation, name, "needs at least two branches");
      for (std::size_t i = 0; i + 1 < branch_guards.size(); ++i) {
        if (!branch_guards[i]) {
          throw Error(Errc::schema_violation, name, "only the last branch may be the default");
        }
      }
      if (loop_guard) throw Error(Errc::schema_violation, name, "unexpected loop guard");
      break;
    }
    case PatternKind::loop:
      if (!loop_guard) throw Error(Errc::schema_violation, name, "loop needs a guard");
      if (!branch_guards.empty()) throw Error(Errc::schema_violation, name, "unexpected branch guards");
      break;
  }
}

Fragment PatternTemplate::instantiate(std::vector<Fragment> parts, const std::string& prefix) const {
  validate();
  const std::string name(pattern_name(kind));
  switch (kind) {
    case PatternKind::sequence:
      return Fragment::sequence(std::move(parts));
    case PatternKind::and_split_join:
      if (parts.size() < 2) throw Error(Errc::schema_violation, name, "needs at least two branches");
      return Fragment::parallel(prefix + ".split", prefix + ".join", std::move(parts));
    case PatternKind::xor_split_join:
      if (parts.size() != branch_guards.size()) {
        throw Error(Errc::schema_violation, name, "branch count does not match guards");
      }
      return Fragment::choice(prefix + ".split", prefix + ".join", std::move(parts), branch_guards);
    case PatternKind::loop: {
      if (parts.size() != 1) throw Error(Errc::schema_violation, name, "loop takes one body");
      Fragment f;
      f.kind = Fragment::Kind::loop;
      f.split_id = prefix + ".split";
      f.join_id = prefix + ".join";
      f.children = std::move(parts);
      f.guards = {loop_guard};
      return f;
    }
  }
  return Fragment::empty();
}

PatternRepository::PatternRepository() {
  templates_[PatternKind::sequence] = PatternTemplate{PatternKind::sequence, {}, std::nullopt};
  templates_[PatternKind::and_split_join] = PatternTemplate{PatternKind::and_split_join, {}, std::nullopt};
  templates_[PatternKind::xor_split_join] = PatternTemplate{PatternKind::xor_split_join, {}, std::nullopt};
  templates_[PatternKind::loop] = PatternTemplate{PatternKind::loop, {}, std::nullopt};
}

const PatternTemplate& PatternRepository::get(PatternKind kind) const { return templates_.at(kind); }

PatternTemplate PatternRepository::xor_with(std::vector<std::optional<Guard>> guards) const {
  auto t = get(PatternKind::xor_split_join);
  t.branch_guards = std::move(guards);
  t.validate();
  return t;
}

PatternTemplate PatternRepository::loop_with(Guard guard) const {
  auto t = get(PatternKind::loop);
  t.loop_guard = std::move(guard);
  t.validate();
  return t;
}

}  // namespace brain
