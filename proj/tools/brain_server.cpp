// SPDX-License-Identifier: Apache-2.0
// brain-server: HTTP API over the fixtures directory. Port from BRAIN_PORT (default 8080).
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "brain/error.hpp"
#include "brain/server/http_api.hpp"

int main(int argc, char** argv) {
  CLI::App app{"BRAIN designer HTTP API"};
  std::string fixtures = "fixtures";
  std::string host = "0.0.0.0";
  app.add_option("--fixtures", fixtures, "Fixtures directory")->capture_default_str();
  app.add_option("--host", host, "Listen address")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  int port = 8080;
  if (const char* env = std::getenv("BRAIN_PORT")) {
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "BRAIN_PORT is not a number: " << env << '\n';
      return 2;
    }
  }

  try {
    brain::server::App state(brain::load_fixtures(fixtures));
    httplib::Server server;
    brain::server::install_routes(server, state);
    std::cerr << "listening on " << host << ':' << port << '\n';
    if (!server.listen(host, port)) {
      std::cerr << "cannot listen on " << host << ':' << port << '\n';
      return 1;
    }
  } catch (const brain::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
