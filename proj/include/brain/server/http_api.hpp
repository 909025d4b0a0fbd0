// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <httplib.h>

#include "brain/pipeline.hpp"
#include "brain/server/session.hpp"

namespace brain::server {

/// Shared server state. Goals are read-only after start-up; the rule
/// repository and the registry carry their own locks.
struct App {
  explicit App(Fixtures fixtures)
      : goals(std::move(fixtures.goals)),
        rules(std::move(fixtures.rules)),
        registry(std::move(fixtures.registry)),
        mocks(std::move(fixtures.mocks)) {}

  GoalModel goals;
  RuleRepository rules;
  Registry registry;
  Mocks mocks;
  SessionStore sessions;
};

/// Error mapping: 404 unknown session or resource, 409 stage order, 422
/// domain errors, 400 malformed JSON. Bodies are {"error", "message", "subjects"}.
void install_routes(httplib::Server& server, App& app);

}  // namespace brain::server
