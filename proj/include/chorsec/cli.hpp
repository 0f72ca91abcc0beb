// Batch entry points behind the command-line tool. Each command is a
// pure function of its inputs and flags writing to the given streams and
// returning the process exit code, so the whole surface is testable
// in-process.
//
// Exit codes: 0 success/accepted, 1 rejected (flow errors, violations,
// or a stuck run), 2 usage/parse/policy/validation errors, 3 step-budget
// cutoff (run only).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "chorsec/runtime.hpp"

namespace chorsec {

int cmd_check(const std::string& source_path, const std::string& policy_path,
              std::ostream& out, std::ostream& err);

int cmd_infer(const std::string& source_path, const std::string& policy_path,
              bool show_constraints, std::ostream& out, std::ostream& err);

struct RunOptions {
  std::optional<std::string> store_path;
  std::uint64_t seed = 0;
  SchedKind sched = SchedKind::Deterministic;
  std::size_t max_steps = 10000;
  bool trace = false;
  bool strict_eval = false;
};

int cmd_run(const std::string& source_path, const RunOptions& options, std::ostream& out,
            std::ostream& err);

struct NitestOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t max_steps = 10000;
};

int cmd_nitest(const std::string& source_path, const std::string& policy_path,
               const NitestOptions& options, std::ostream& out, std::ostream& err);

}  // namespace chorsec
