#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "valkit/task.hpp"

// Batch front end: every subcommand consumes a task file and streams one
// JSON record per task plus a summary. `run` executes all tasks; the topical
// subcommands filter by task kind.
int main(int argc, char** argv) {
  CLI::App app{"valkit - exact computation kit for equicharacteristic-0 valued fields"};
  app.require_subcommand(1);

  std::string task_path;
  valkit::RunOptions options;
  int degree_bound = 0;
  std::uint64_t seed = 0;
  bool seed_set = false, degree_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("taskfile", task_path, "task file (JSON)")->required();
    cmd->add_option("--degree-bound", degree_bound, "override every presentation's degree bound")
        ->each([&](const std::string&) { degree_set = true; });
    cmd->add_option("--seed", seed, "64-bit seed for randomized tasks")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--format", options.format, "report format: json|text")
        ->check(CLI::IsMember({"json", "text"}));
  };

  struct Sub {
    CLI::App* cmd;
    std::string filter;
  };
  std::vector<Sub> subs;

  subs.push_back({app.add_subcommand("run", "run every task in the file"), ""});

  CLI::App* sep = app.add_subcommand("sep", "separated-basis operations");
  sep->require_subcommand(1);
  subs.push_back({sep->add_subcommand("check", "run sep-check tasks"), "sep-check"});
  subs.push_back({sep->add_subcommand("make", "run sep-make tasks"), "sep-make"});
  subs.push_back({sep->add_subcommand("lift", "run sep-lift tasks"), "sep-lift"});

  CLI::App* comp = app.add_subcommand("comp", "compositum checks");
  comp->require_subcommand(1);
  subs.push_back({comp->add_subcommand("verify", "run comp-verify tasks"), "comp-verify"});

  CLI::App* iso = app.add_subcommand("iso", "isomorphism extension");
  iso->require_subcommand(1);
  subs.push_back({iso->add_subcommand("extend", "run iso-extend tasks"), "iso-extend"});

  CLI::App* val = app.add_subcommand("val", "valuation refinement");
  val->require_subcommand(1);
  subs.push_back({val->add_subcommand("refine", "run val-refine tasks"), "val-refine"});

  CLI::App* rv = app.add_subcommand("rv", "RV-sort operations");
  rv->require_subcommand(1);
  subs.push_back({rv->add_subcommand("indep", "run rv-indep tasks"), "rv-indep"});

  subs.push_back({app.add_subcommand("suite", "run suite-run tasks"), "suite-run"});

  for (auto& s : subs) add_common(s.cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : valkit::kExitUsage;
  }

  if (degree_set) options.degree_bound = degree_bound;
  if (seed_set) options.seed = seed;
  for (const auto& s : subs)
    if (s.cmd->parsed() || (s.cmd->get_parent() && s.cmd->get_parent()->parsed() && s.cmd->parsed()))
      options.task_filter = s.filter;

  return valkit::run_task_path(task_path, options, std::cout);
}
