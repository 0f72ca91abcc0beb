#include "chorsec/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "chorsec/harness.hpp"
#include "chorsec/parser.hpp"
#include "chorsec/typecheck.hpp"

namespace chorsec {

namespace {

constexpr int kAccepted = 0;
constexpr int kRejected = 1;
constexpr int kInputError = 2;
constexpr int kCutoff = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct LoadedProgram {
  Program program;
  std::string path;
};

// Parses and validates a source file; prints diagnostics and returns
// nullopt on failure.
std::optional<LoadedProgram> load_program(const std::string& path, std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return std::nullopt;
  }
  Program prog;
  try {
    prog = parse_program(text);
  } catch (const ParseError& e) {
    err << "error " << path << ":" << e.span.line << ":" << e.span.col << ": " << e.what()
        << "\n";
    return std::nullopt;
  }
  auto diags = validate_program(prog);
  if (!diags.empty()) {
    err << render_diagnostics(diags, path);
    return std::nullopt;
  }
  return LoadedProgram{std::move(prog), path};
}

std::optional<Policy> load_policy(const std::string& path, std::ostream& err) {
  try {
    return parse_policy(read_file(path));
  } catch (const PolicyError& e) {
    err << "error " << path << ":" << e.line << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return std::nullopt;
}

}  // namespace

int cmd_check(const std::string& source_path, const std::string& policy_path,
              std::ostream& out, std::ostream& err) {
  auto loaded = load_program(source_path, err);
  if (!loaded) return kInputError;
  auto policy = load_policy(policy_path, err);
  if (!policy) return kInputError;
  try {
    LfpResult inferred = lfp(loaded->program);
    CheckReport report = check_program(loaded->program, *policy, inferred.delta);
    for (const auto& e : report.errors) out << e.render(source_path) << "\n";
    if (!report.delta_consistent)
      out << "error: reconstructed procedure context is not self-consistent\n";
    return report.accepted() ? kAccepted : kRejected;
  } catch (const PolicyError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int cmd_infer(const std::string& source_path, const std::string& policy_path,
              bool show_constraints, std::ostream& out, std::ostream& err) {
  auto loaded = load_program(source_path, err);
  if (!loaded) return kInputError;
  auto policy = load_policy(policy_path, err);
  if (!policy) return kInputError;
  LfpResult inferred = lfp(loaded->program);
  if (show_constraints) {
    for (std::size_t i = 0; i < inferred.history.size(); ++i) {
      out << "iteration " << (i + 1) << ":\n";
      render_delta(inferred.history[i], out);
    }
  }
  render_delta(inferred.delta, out);
  out << "iterations=" << inferred.iterations << "\n";
  return kAccepted;
}

int cmd_run(const std::string& source_path, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
  auto loaded = load_program(source_path, err);
  if (!loaded) return kInputError;
  CStore store;
  if (options.store_path) {
    try {
      store = parse_store(read_file(*options.store_path));
    } catch (const ParseError& e) {
      err << "error " << *options.store_path << ":" << e.span.line << ": " << e.what() << "\n";
      return kInputError;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kInputError;
    }
  }
  FunEnv fe;
  try {
    fe = make_fun_env(loaded->program, nullptr, options.seed, options.strict_eval);
  } catch (const PolicyError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  Scheduler sched = make_scheduler(options.sched, options.seed);
  Outcome outcome = run(initial_configuration(loaded->program, std::move(store)), fe, sched,
                        options.max_steps);
  if (options.trace)
    for (const auto& label : outcome.trace) out << label.to_text() << "\n";
  print_store(outcome.store, out);
  switch (outcome.kind) {
    case Outcome::Kind::Terminated:
      return kAccepted;
    case Outcome::Kind::Stuck:
      err << "stuck: " << outcome.diagnostic << "\n";
      return kRejected;
    case Outcome::Kind::Cutoff:
      err << "cutoff after " << outcome.trace.size() << " steps\n";
      return kCutoff;
  }
  return kInputError;
}

int cmd_nitest(const std::string& source_path, const std::string& policy_path,
               const NitestOptions& options, std::ostream& out, std::ostream& err) {
  auto loaded = load_program(source_path, err);
  if (!loaded) return kInputError;
  auto policy = load_policy(policy_path, err);
  if (!policy) return kInputError;
  try {
    LfpResult inferred = lfp(loaded->program);
    NiReport report = nitest(loaded->program, *policy, inferred.delta, options.trials,
                             options.seed, options.max_steps);
    render_report(report, out);
    return report.violations.empty() ? kAccepted : kRejected;
  } catch (const PolicyError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace chorsec
