// Expression evaluation, the labelled small-step semantics of recursive
// choreographies, schedulers resolving its nondeterminism, and the
// big-step driver that collects traces.
//
// The transition enumeration implements every rule: local assignment,
// value communication, selection, the two conditional rules, the
// decentralised call rules with their runtime markers, stepping past
// instructions of independent processes, and stepping inside both
// branches of a conditional when they take the same action to the same
// store. The enumeration order is fixed — lexicographic on (derivation
// position path from the head of the sequence, label text), with call
// successors ordered by the entering process's position in the actual
// parameter list — so traces are reproducible bit for bit.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "chorsec/ast.hpp"
#include "chorsec/lattice.hpp"

namespace chorsec {

struct TransitionLabel {
  enum class Kind { Tau, Com, Sel, Then, Else };
  Kind kind = Kind::Tau;
  std::string p;
  std::string q;          // Com/Sel only
  std::string sel_label;  // Sel only
  Value value;            // Com only

  static TransitionLabel tau(std::string p);
  static TransitionLabel com(std::string p, Value v, std::string q);
  static TransitionLabel sel(std::string p, std::string q, std::string label);
  static TransitionLabel then_at(std::string p);
  static TransitionLabel else_at(std::string p);

  bool operator==(const TransitionLabel&) const = default;

  // Canonical forms: tau@p, com@p->q:<v>, sel@p->q:<L>, then@p, else@p.
  std::string to_text() const;
};

std::set<std::string> pn_label(const TransitionLabel& label);

// Function environment: builtin table is fixed; externs are evaluated as
// a deterministic keyed hash of (name, canonical argument text, seed) so
// one seed denotes one mathematical function. In strict mode division by
// zero and argument type mismatches raise EvalError instead of being
// totalised.
struct FunEnv {
  std::map<std::string, ExternDecl> externs;
  std::uint64_t fun_seed = 0;
  bool strict = false;
};

// Merges the program's extern declarations with the policy's (if given).
// Conflicting signatures or clashes with builtin names throw PolicyError.
FunEnv make_fun_env(const Program& prog, const Policy* policy, std::uint64_t fun_seed,
                    bool strict = false);

// σ ⊢ e ↓ v. Throws EvalError on unbound variables, unknown functions,
// or arity mismatches; in total mode every applied function returns.
Value eval_expr(const PStore& sigma, const Expr& expr, const FunEnv& fe);

struct Configuration {
  Choreography chor;
  CStore store;
  const std::map<std::string, ProcDef>* procs = nullptr;
};

Configuration initial_configuration(const Program& prog, CStore store);

struct Transition {
  TransitionLabel label;
  Configuration next;
  // Derivation position: instruction index, then the entering-process
  // index for calls, or the two branch sub-paths (separated by -1) for
  // steps inside a conditional.
  std::vector<int> path;
};

// Every derivable transition, in the canonical order described above.
// Expression evaluation failures abort the enumeration with EvalError.
std::vector<Transition> enabled(const Configuration& cfg, const FunEnv& fe);

// The chosen successor. Throws StepError: Terminated on the empty
// choreography, Stuck when nothing is enabled, BadIndex otherwise.
Transition step(const Configuration& cfg, const FunEnv& fe, std::size_t index);

enum class SchedKind { Deterministic, Random };

// Picks an index given the number of enabled transitions (>= 1).
using Scheduler = std::function<std::size_t(std::size_t)>;

// Deterministic always picks index 0; random draws from a splitmix64
// stream seeded with `seed` and reduces modulo the option count.
Scheduler make_scheduler(SchedKind kind, std::uint64_t seed = 0);

struct Outcome {
  enum class Kind { Terminated, Cutoff, Stuck };
  Kind kind = Kind::Terminated;
  CStore store;                       // final (or last reached) store
  std::vector<TransitionLabel> trace; // full or partial
  std::string diagnostic;             // Stuck reason
};

Outcome run(Configuration cfg, const FunEnv& fe, Scheduler& scheduler,
            std::size_t max_steps);

// Store files: one `PROC.VAR = VALUE` per line, `#` comments allowed;
// values are integer literals, true/false, or double-quoted strings.
CStore parse_store(std::string_view text);
void print_store(const CStore& store, std::ostream& out);

}  // namespace chorsec
