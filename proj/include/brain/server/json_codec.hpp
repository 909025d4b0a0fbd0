// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "brain/error.hpp"
#include "brain/pipeline.hpp"

namespace brain::server {

using Json = nlohmann::json;

Json to_json(const Scalar& v);
Json to_json(const Env& env);
/// Object of path -> bool | number | string. Throws Error(schema_violation).
Env env_from_json(const Json& j);

Json to_json(const Task& t);
Json to_json(const Goal& g);
Json to_json(const GoalModel& m);
Json to_json(const Rule& r);
Json to_json(const DependencyGraph& d);
Json to_json(const Analysis& a);
Json to_json(const WorkflowGraph& wf);
Json to_json(const Provider& p);
Json to_json(const TraceEvent& e);
Json to_json(const ExecutionTrace& t);
Json to_json(const Violation& v);
Json to_json(const Simulation& s);
Json error_json(const Error& e);
Json error_json(std::string_view name, std::string_view message);

}  // namespace brain::server
