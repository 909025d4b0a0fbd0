// SPDX-License-Identifier: Apache-2.0
// brain: headless composition pipeline (compose -> bind -> simulate -> check).
#include <CLI11.hpp>

#include <iostream>

#include "brain/error.hpp"
#include "brain/io.hpp"
#include "brain/pipeline.hpp"

namespace {

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::size_t start = 0;
    while (start <= item.size()) {
      auto pos = item.find(',', start);
      if (pos == std::string::npos) pos = item.size();
      if (pos > start) out.push_back(item.substr(start, pos - start));
      start = pos + 1;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BRAIN business-rules process composer", "brain"};
  app.require_subcommand(1);

  std::string goals_file, rules_dir, out_file, process_file, providers_file, mocks_file, env_file, trace_file;
  std::vector<std::string> select, constraints, binds;
  bool no_constraints = false;
  std::uint64_t seed = 0;

  auto* compose = app.add_subcommand("compose", "Compose an abstract process from goals and rules");
  compose->add_option("--goals", goals_file, "Goal model XML")->required();
  compose->add_option("--rules", rules_dir, "Rule directory")->required();
  compose->add_option("--select", select, "Goal ids (comma separated or repeated)")->required();
  compose->add_option("--out", out_file, "Abstract BPEL output")->required();
  auto* constraints_opt =
      compose->add_option("--constraints", constraints, "Constraint rule ids to attach (default: all applicable)");
  compose->add_flag("--no-constraints", no_constraints, "Attach no constraint rules")->excludes(constraints_opt);

  auto* bind = app.add_subcommand("bind", "Bind partner links to providers");
  bind->add_option("--process", process_file, "Abstract BPEL")->required();
  bind->add_option("--providers", providers_file, "Provider registry XML")->required();
  bind->add_option("--out", out_file, "Executable BPEL output")->required();
  bind->add_option("--rules", rules_dir, "Rule directory (discovery rules filter proposals)");
  bind->add_option("--bind", binds, "Explicit binding link=provider");

  auto* simulate = app.add_subcommand("simulate", "Simulate an executable process");
  simulate->add_option("--process", process_file, "Executable BPEL")->required();
  simulate->add_option("--mocks", mocks_file, "Mock endpoints XML")->required();
  simulate->add_option("--env", env_file, "Initial environment XML")->required();
  simulate->add_option("--seed", seed, "Scheduler seed")->required();
  simulate->add_option("--trace", trace_file, "Trace output")->required();

  auto* check = app.add_subcommand("check", "Check a trace against the behavior rules");
  check->add_option("--trace", trace_file, "Trace file")->required();
  check->add_option("--rules", rules_dir, "Rule directory")->required();

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return 2;
  }

  try {
    using namespace brain;
    if (*compose) {
      const auto model = load_goal_model(read_file(goals_file));
      const auto repo = load_rule_directory(rules_dir);
      const auto ids = split_ids(select);
      const auto analysis = analyze(model, repo, ids);
      const auto wf = synthesize(analysis, repo);
      std::vector<std::string> rule_ids;
      if (!no_constraints) rule_ids = constraints_opt->count() ? split_ids(constraints) : default_constraint_ids(analysis, repo);
      const auto annotated = apply_constraints(wf, repo, rule_ids);
      write_file(out_file, serialize_bpel(abstract_process(annotated, model, ids.front())));
    } else if (*bind) {
      const auto process = parse_bpel(read_file(process_file));
      validate_bpel(process);
      const auto registry = load_providers(read_file(providers_file));
      std::vector<DiscoveryRule> rules;
      if (!rules_dir.empty()) rules = discovery_rules(load_rule_directory(rules_dir));
      std::map<std::string, std::string> chosen;
      for (const auto& b : binds) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == b.size()) {
          std::cerr << "--bind expects link=provider, got '" << b << "'\n";
          return 2;
        }
        chosen[b.substr(0, eq)] = b.substr(eq + 1);
      }
      write_file(out_file, serialize_bpel(bind_with_defaults(process, chosen, rules, registry)));
    } else if (*simulate) {
      const auto process = parse_bpel(read_file(process_file));
      validate_bpel(process);
      const auto trace = execute(process, load_mocks(read_file(mocks_file)), load_env(read_file(env_file)), seed);
      write_file(trace_file, trace_to_text(trace));
      std::cout << (trace.status == TraceStatus::completed ? "completed" : "faulted") << ' ' << trace.events.size()
                << " events\n";
    } else if (*check) {
      const auto trace = parse_trace_text(read_file(trace_file));
      const auto violations = check_conformance(trace, behavior_rules(load_rule_directory(rules_dir)));
      if (violations.empty()) {
        std::cout << "conformant\n";
        return 0;
      }
      for (const auto& v : violations) std::cout << "violation " << format_violation(v) << '\n';
      return 1;
    }
  } catch (const brain::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
