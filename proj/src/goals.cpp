// SPDX-License-Identifier: Apache-2.0
#include "brain/goals.hpp"

#include <algorithm>
#include <set>

#include "brain/error.hpp"

namespace brain {

namespace {

const Goal* find_goal_in(const Goal& g, std::string_view id) {
  if (g.id == id) return &g;
  for (const auto& c : g.children) {
    if (const auto* hit = find_goal_in(c, id)) return hit;
  }
  return nullptr;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += ',';
    out += items[i];
  }
  return out;
}

void check_task(const Task& t) {
  if (t.id.empty()) throw Error(Errc::schema_violation, "task", "empty id");
  if (t.operation.empty()) throw Error(Errc::schema_violation, t.id, "empty operation");
  for (const auto* vars : {&t.input_vars, &t.output_vars}) {
    for (const auto& v : *vars) {
      if (v.empty() || v.find(',') != std::string::npos) {
        throw Error(Errc::schema_violation, t.id, "invalid variable name '" + v + "'");
      }
    }
  }
}

// Pre-order walk shared by the XML loader and the in-memory validator, so
// both report the same first error.
class GoalChecker {
 public:
  explicit GoalChecker(const std::vector<Task>& tasks) {
    for (const auto& t : tasks) {
      check_task(t);
      if (!task_ids_.insert(t.id).second) throw Error(Errc::duplicate_task_id, t.id);
    }
  }

  void enter(const Goal& g) {
    if (g.id.empty()) throw Error(Errc::schema_violation, "goal", "empty id");
    if (std::find(ancestors_.begin(), ancestors_.end(), g.id) != ancestors_.end()) {
      throw Error(Errc::cyclic_goal, g.id, "goal contains itself");
    }
    if (!goal_ids_.insert(g.id).second) throw Error(Errc::duplicate_goal_id, g.id);
    ancestors_.push_back(g.id);
  }
  void leave() { ancestors_.pop_back(); }

  void task_ref(const std::string& id) {
    if (!task_ids_.contains(id)) throw Error(Errc::dangling_task_ref, id);
  }

 private:
  std::set<std::string> task_ids_;
  std::set<std::string> goal_ids_;
  std::vector<std::string> ancestors_;
};

void check_goal(const Goal& g, GoalChecker& checker) {
  checker.enter(g);
  if (g.children.empty() == g.task_refs.empty()) {
    throw Error(Errc::schema_violation, g.id, "a goal needs sub-goals or task references, not both");
  }
  for (const auto& ref : g.task_refs) checker.task_ref(ref);
  for (const auto& c : g.children) check_goal(c, checker);
  checker.leave();
}

Goal goal_from_xml(const xml::Element& el, GoalChecker& checker) {
  Goal g;
  g.id = el.attribute("id");
  g.name = el.attribute("name");
  const auto& ordered = el.attribute("ordered");
  if (ordered != "true" && ordered != "false") {
    throw Error(Errc::schema_violation, g.id, "ordered must be true or false");
  }
  g.ordered = ordered == "true";
  checker.enter(g);
  for (const auto& c : el.children) {
    if (c.name == "goal") {
      if (!g.task_refs.empty()) throw Error(Errc::schema_violation, g.id, "mixes goals and task references");
      g.children.push_back(goal_from_xml(c, checker));
    } else if (c.name == "taskRef") {
      if (!g.children.empty()) throw Error(Errc::schema_violation, g.id, "mixes goals and task references");
      const auto& ref = c.attribute("id");
      checker.task_ref(ref);
      g.task_refs.push_back(ref);
    } else {
      throw Error(Errc::schema_violation, g.id + "/" + c.name, "unknown element");
    }
  }
  if (g.children.empty() && g.task_refs.empty()) {
    throw Error(Errc::schema_violation, g.id, "goal without sub-goals or task references");
  }
  checker.leave();
  return g;
}

}  // namespace

const Task* GoalModel::find_task(std::string_view id) const {
  for (const auto& t : tasks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const Goal* GoalModel::find_goal(std::string_view id) const { return find_goal_in(root, id); }

GoalModel goal_model_from_xml(const xml::Element& root) {
  if (root.name != "goalModel") throw Error(Errc::schema_violation, root.name, "expected <goalModel>");
  GoalModel model;
  model.requester = root.optional_attribute("requester");
  if (root.children.size() != 2 || root.children[0].name != "tasks" || root.children[1].name != "goal") {
    // A second top-level <goal> makes a forest.
    throw Error(Errc::schema_violation, "goalModel", "expected <tasks> followed by a single root <goal>");
  }
  for (const auto& t : root.children[0].children) {
    if (t.name != "task") throw Error(Errc::schema_violation, "tasks/" + t.name, "unknown element");
    Task task;
    task.id = t.attribute("id");
    task.name = t.attribute("name");
    task.operation = t.attribute("operation");
    task.participant = t.attribute("participant");
    task.input_vars = split_list(t.optional_attribute("inputs").value_or(""));
    task.output_vars = split_list(t.optional_attribute("outputs").value_or(""));
    model.tasks.push_back(std::move(task));
  }
  GoalChecker checker(model.tasks);
  model.root = goal_from_xml(root.children[1], checker);
  return model;
}

GoalModel load_goal_model(std::string_view xml_text) {
  return goal_model_from_xml(xml::parse(xml_text));
}

void validate_goal_model(const GoalModel& model) {
  GoalChecker checker(model.tasks);
  check_goal(model.root, checker);
}

namespace {

xml::Element goal_to_xml(const Goal& g) {
  xml::Element el("goal");
  el.set("id", g.id).set("name", g.name).set("ordered", g.ordered ? "true" : "false");
  for (const auto& c : g.children) el.add(goal_to_xml(c));
  for (const auto& ref : g.task_refs) el.add(xml::Element("taskRef").set("id", ref));
  return el;
}

}  // namespace

xml::Element goal_model_to_xml(const GoalModel& model) {
  xml::Element root("goalModel");
  if (model.requester) root.set("requester", *model.requester);
  xml::Element tasks("tasks");
  for (const auto& t : model.tasks) {
    xml::Element el("task");
    el.set("id", t.id)
        .set("name", t.name)
        .set("operation", t.operation)
        .set("participant", t.participant)
        .set("inputs", join_list(t.input_vars))
        .set("outputs", join_list(t.output_vars));
    tasks.add(std::move(el));
  }
  root.add(std::move(tasks));
  root.add(goal_to_xml(model.root));
  return root;
}

std::string serialize_goal_model(const GoalModel& model) {
  return xml::write(goal_model_to_xml(model));
}

namespace {

struct SelectionWalk {
  const GoalModel& model;
  const std::set<std::string>& selected_goals;
  std::vector<std::string> task_order;
  std::set<std::string> seen;
  std::vector<TaskPair> implied;
  std::set<TaskPair> implied_seen;

  void add_pair(const std::string& a, const std::string& b) {
    if (a == b) return;
    if (implied_seen.insert({a, b}).second) implied.emplace_back(a, b);
  }

  // Returns the selected task occurrences under g, in document order.
  std::vector<std::string> walk(const Goal& g, bool selected) {
    selected = selected || selected_goals.contains(g.id);
    std::vector<std::vector<std::string>> units;
    if (g.children.empty()) {
      for (const auto& ref : g.task_refs) {
        units.push_back(selected ? std::vector<std::string>{ref} : std::vector<std::string>{});
        if (selected && seen.insert(ref).second) task_order.push_back(ref);
      }
    } else {
      for (const auto& c : g.children) units.push_back(walk(c, selected));
    }
    std::vector<std::string> out;
    const std::vector<std::string>* previous = nullptr;
    for (const auto& unit : units) {
      if (unit.empty()) continue;
      if (g.ordered && previous) add_pair(previous->back(), unit.front());
      previous = &unit;
      out.insert(out.end(), unit.begin(), unit.end());
    }
    return out;
  }
};

}  // namespace

Selection select_goals(const GoalModel& model, const std::vector<std::string>& goal_ids) {
  if (goal_ids.empty()) throw Error(Errc::empty_selection, "goals", "no goal selected");
  std::set<std::string> selected;
  for (const auto& id : goal_ids) {
    if (!model.find_goal(id)) throw Error(Errc::unknown_goal, id);
    selected.insert(id);
  }
  SelectionWalk walk{model, selected, {}, {}, {}, {}};
  walk.walk(model.root, false);
  Selection out;
  for (const auto& id : walk.task_order) {
    const auto* t = model.find_task(id);
    if (!t) throw Error(Errc::dangling_task_ref, id);
    out.tasks.push_back(*t);
  }
  out.implied = std::move(walk.implied);
  return out;
}

}  // namespace brain
