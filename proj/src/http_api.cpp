// SPDX-License-Identifier: Apache-2.0
#include "brain/server/http_api.hpp"

#include "brain/server/json_codec.hpp"

namespace brain::server {

namespace {

constexpr const char* kJson = "application/json";

struct HttpNotFound {
  std::string what;
};

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const HttpNotFound& e) {
      reply(res, 404, error_json("NotFound", e.what));
    } catch (const StageOrder& e) {
      reply(res, 409, error_json("StageOrder", e.what()));
    } catch (const Error& e) {
      reply(res, 422, error_json(e));
    } catch (const Json::exception& e) {
      reply(res, 400, error_json("BadRequest", e.what()));
    }
  };
}

Json body_json(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  return Json::parse(req.body);
}

std::shared_ptr<Session> session_of(App& app, const httplib::Request& req) {
  auto s = app.sessions.find(req.matches[1]);
  if (!s) throw HttpNotFound{"unknown session '" + std::string(req.matches[1]) + "'"};
  return s;
}

// Runs `f` with the session's lock held so requests on one session are serialized.
template <class F>
httplib::Server::Handler with_session(App& app, F f) {
  return guarded([&app, f](const httplib::Request& req, httplib::Response& res) {
    auto s = session_of(app, req);
    std::scoped_lock lock(s->mutex());
    f(*s, req, res);
  });
}

Json stage_json(const Session& s) { return stage_name(s.stage()); }

}  // namespace

void install_routes(httplib::Server& server, App& app) {
  server.Get("/goals", guarded([&app](const httplib::Request&, httplib::Response& res) {
               reply(res, 200, to_json(app.goals));
             }));

  server.Get("/rules", guarded([&app](const httplib::Request& req, httplib::Response& res) {
               RuleQuery q;
               if (req.has_param("kind")) {
                 const auto kind = req.get_param_value("kind");
                 q.kind = parse_rule_kind(kind);
                 if (!q.kind) throw Error(Errc::unknown_rule_kind, kind);
               }
               if (req.has_param("task")) q.task = req.get_param_value("task");
               Json out = Json::array();
               for (const auto& r : app.rules.query(q)) out.push_back(to_json(r));
               reply(res, 200, out);
             }));

  server.Get(R"(/rules/([^/]+))", guarded([&app](const httplib::Request& req, httplib::Response& res) {
               auto r = app.rules.find(req.matches[1]);
               if (!r) throw HttpNotFound{"unknown rule '" + std::string(req.matches[1]) + "'"};
               reply(res, 200, to_json(*r));
             }));

  server.Post("/rules", guarded([&app](const httplib::Request& req, httplib::Response& res) {
                auto rule = parse_rule(req.body);
                auto id = rule_id(rule);
                app.rules.put(std::move(rule));
                reply(res, 201, {{"id", id}});
              }));

  server.Get("/providers", guarded([&app](const httplib::Request&, httplib::Response& res) {
               Json out = Json::array();
               for (const auto& p : app.registry.providers()) out.push_back(to_json(p));
               reply(res, 200, out);
             }));

  server.Post("/sessions", guarded([&app](const httplib::Request&, httplib::Response& res) {
                auto s = app.sessions.create();
                reply(res, 201, {{"sessionId", s->id()}, {"stage", stage_json(*s)}});
              }));

  server.Get(R"(/sessions/([^/]+))", with_session(app, [](Session& s, const httplib::Request&, httplib::Response& res) {
               reply(res, 200, {{"sessionId", s.id()}, {"stage", stage_json(s)}, {"selectedGoals", s.selected_goals()}});
             }));

  server.Post(R"(/sessions/([^/]+)/select)",
              with_session(app, [&app](Session& s, const httplib::Request& req, httplib::Response& res) {
                const auto body = body_json(req);
                auto ids = body.at("goalIds").get<std::vector<std::string>>();
                Json out = to_json(s.select(app.goals, app.rules, std::move(ids)));
                out["stage"] = stage_json(s);
                reply(res, 200, out);
              }));

  server.Post(R"(/sessions/([^/]+)/synthesize)",
              with_session(app, [&app](Session& s, const httplib::Request&, httplib::Response& res) {
                Json out = {{"workflow", to_json(s.synthesize(app.rules))}};
                out["stage"] = stage_json(s);
                reply(res, 200, out);
              }));

  server.Post(R"(/sessions/([^/]+)/constraints)",
              with_session(app, [&app](Session& s, const httplib::Request& req, httplib::Response& res) {
                const auto body = body_json(req);
                auto ids = body.value("ruleIds", std::vector<std::string>{});
                const auto& process = s.constrain(app.goals, app.rules, ids);
                reply(res, 200,
                      {{"workflow", to_json(*s.annotated())}, {"bpel", serialize_bpel(process)}, {"stage", stage_json(s)}});
              }));

  server.Get(R"(/sessions/([^/]+)/providers/([^/]+))",
             with_session(app, [&app](Session& s, const httplib::Request& req, httplib::Response& res) {
               const std::string link = req.matches[2];
               Json out = Json::array();
               for (const auto& p : s.proposals(app.goals, app.rules, app.registry, link)) out.push_back(to_json(p));
               reply(res, 200, {{"partnerLink", link}, {"proposals", out}});
             }));

  server.Post(R"(/sessions/([^/]+)/bind)",
              with_session(app, [&app](Session& s, const httplib::Request& req, httplib::Response& res) {
                auto body = body_json(req);
                if (body.contains("bindings")) body = body.at("bindings");
                auto chosen = body.get<std::map<std::string, std::string>>();
                const auto& process = s.bind(app.goals, app.rules, app.registry, chosen);
                reply(res, 200, {{"bpel", serialize_bpel(process)}, {"stage", stage_json(s)}});
              }));

  server.Post(R"(/sessions/([^/]+)/simulate)",
              with_session(app, [&app](Session& s, const httplib::Request& req, httplib::Response& res) {
                const auto body = body_json(req);
                const auto env = env_from_json(body.value("env", Json::object()));
                const auto seed = body.value("seed", std::uint64_t{0});
                reply(res, 200, to_json(s.simulate(app.mocks, env, seed)));
              }));
}

}  // namespace brain::server
