// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "brain/expr.hpp"
#include "brain/goals.hpp"
#include "brain/workflow.hpp"

namespace brain {

class Registry;

/// Copyable owning pointer for recursive value types.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT: implicit by design of the variant
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  bool operator==(const Box& other) const { return *ptr_ == *other.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Activity;

struct SequenceActivity {
  std::vector<Activity> children;
  bool operator==(const SequenceActivity&) const = default;
};
struct FlowActivity {
  std::vector<Activity> children;
  bool operator==(const FlowActivity&) const = default;
};
/// Decision point. `name` is the XOR split it came from; `rule` names the
/// rule whose condition is tested (reported in ruleEval trace events).
struct IfActivity {
  std::string name;
  std::string rule;
  Expr condition;
  Box<Activity> then_branch;
  std::optional<Box<Activity>> else_branch;
  bool operator==(const IfActivity&) const = default;
};
struct InvokeActivity {
  std::string name;  // task id
  std::string partner_link;
  std::string operation;
  std::vector<std::string> input_vars;
  std::vector<std::string> output_vars;
  bool operator==(const InvokeActivity&) const = default;
};
struct ReceiveActivity {
  std::string name;
  std::string partner_link;
  std::string operation;
  std::vector<std::string> vars;
  bool operator==(const ReceiveActivity&) const = default;
};
struct ReplyActivity {
  std::string name;
  std::string partner_link;
  std::string operation;
  std::vector<std::string> vars;
  bool operator==(const ReplyActivity&) const = default;
};
struct FaultActivity {
  std::string name;
  bool operator==(const FaultActivity&) const = default;
};
struct EmptyActivity {
  bool operator==(const EmptyActivity&) const = default;
};

struct Activity {
  using Variant = std::variant<SequenceActivity, FlowActivity, IfActivity, InvokeActivity, ReceiveActivity,
                               ReplyActivity, FaultActivity, EmptyActivity>;
  Variant node;

  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, Activity> && std::is_constructible_v<Variant, T>)
  Activity(T&& value) : node(std::forward<T>(value)) {}  // NOLINT: implicit from any alternative

  bool operator==(const Activity&) const = default;
};

struct PartnerLink {
  std::string name;
  std::string family;
  std::optional<std::string> provider;
  bool operator==(const PartnerLink&) const = default;
};

/// BPEL-subset process. Abstract processes carry partner links with a family
/// only; executable ones have every link bound to a provider.
struct BpelProcess {
  std::string name;
  bool executable = false;
  std::vector<PartnerLink> partner_links;  // sorted by name
  std::vector<std::string> variables;      // sorted, unique
  Activity body = EmptyActivity{};

  const PartnerLink* find_link(std::string_view name) const;
  bool operator==(const BpelProcess&) const = default;
};

/// Names of the task activities (invoke/receive/reply) in document order.
std::vector<std::string> task_activities(const Activity& body);

/// Maps a workflow to an abstract process: sequence -> sequence, AND
/// fragment -> flow, XOR fragment -> (nested) if, task -> invoke. When the
/// process has a requester and at least two tasks, an entry task performed by
/// the requester becomes a receive and an exit task performed by the
/// requester becomes a reply. One partner link per participant, named
/// `<participant>PL`, family = participant. Errors: unresolved_task.
BpelProcess graph_to_bpel(const WorkflowGraph& wf, const std::vector<Task>& catalog, std::string process_name,
                          const std::optional<std::string>& requester = std::nullopt);

std::string partner_link_name(std::string_view participant);

/// Binds links to providers (links not mentioned keep their current binding).
/// Errors: unknown_partner_link, unknown_provider, family_mismatch, unbound_link.
BpelProcess bind_partners(const BpelProcess& process, const std::map<std::string, std::string>& bindings,
                          const Registry& registry);

/// Throws Error(schema_violation) with a location path. parse_bpel runs it too.
void validate_bpel(const BpelProcess& process);

xml::Element bpel_to_xml(const BpelProcess& process);
std::string serialize_bpel(const BpelProcess& process);
BpelProcess parse_bpel(std::string_view xml_text);

}  // namespace brain
