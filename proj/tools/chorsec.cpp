// chorsec — checker and interpreter for recursive choreographies with
// lattice-based information-flow policies.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chorsec/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chorsec: information-flow checker and interpreter for choreographies"};
  app.require_subcommand(1);

  std::string source, policy;

  auto* check = app.add_subcommand("check", "type-check a choreography against a flow policy");
  check->add_option("file", source, "choreography source file")->required();
  check->add_option("--policy", policy, "flow policy file")->required();

  bool show_constraints = false;
  auto* infer = app.add_subcommand("infer", "reconstruct the procedure context");
  infer->add_option("file", source, "choreography source file")->required();
  infer->add_option("--policy", policy, "flow policy file")->required();
  infer->add_flag("--show-constraints", show_constraints,
                  "also print the context after every iteration");

  chorsec::RunOptions run_options;
  std::string store_path, sched_name = "det";
  auto* run = app.add_subcommand("run", "execute a choreography");
  run->add_option("file", source, "choreography source file")->required();
  run->add_option("--store", store_path, "initial store file");
  run->add_option("--seed", run_options.seed, "scheduler and function seed");
  run->add_option("--sched", sched_name, "scheduler kind: det or rand")
      ->check(CLI::IsMember({"det", "rand"}));
  run->add_option("--max-steps", run_options.max_steps, "step budget");
  run->add_flag("--trace", run_options.trace, "print one transition label per line");
  run->add_flag("--strict-eval", run_options.strict_eval,
                "treat division by zero and type mismatches as errors");

  chorsec::NitestOptions ni_options;
  auto* nitest = app.add_subcommand("nitest", "differentially test non-interference");
  nitest->add_option("file", source, "choreography source file")->required();
  nitest->add_option("--policy", policy, "flow policy file")->required();
  nitest->add_option("--trials", ni_options.trials, "number of trials");
  nitest->add_option("--seed", ni_options.seed, "base seed");
  nitest->add_option("--max-steps", ni_options.max_steps, "per-execution step budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) return chorsec::cmd_check(source, policy, std::cout, std::cerr);
  if (infer->parsed())
    return chorsec::cmd_infer(source, policy, show_constraints, std::cout, std::cerr);
  if (run->parsed()) {
    if (!store_path.empty()) run_options.store_path = store_path;
    run_options.sched =
        sched_name == "rand" ? chorsec::SchedKind::Random : chorsec::SchedKind::Deterministic;
    return chorsec::cmd_run(source, run_options, std::cout, std::cerr);
  }
  return chorsec::cmd_nitest(source, policy, ni_options, std::cout, std::cerr);
}
