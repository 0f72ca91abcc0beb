// The flow-typing judgement over choreographies: expression levels,
// per-instruction write checks under a program-counter label, branch
// checking at a raised pc, and call checking through the constraint
// context. The checker records every violated inequality and continues
// as if it had held, so one run reports all errors.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chorsec/ast.hpp"
#include "chorsec/infer.hpp"
#include "chorsec/lattice.hpp"

namespace chorsec {

struct FlowError {
  Span span;
  std::string rule;      // t-local | t-com | t-proc
  std::string expr_label;
  std::string pc;
  std::string computed;  // join of expr label and pc (lhs of the inequality)
  std::string target_label;
  std::string proc;      // written location
  std::string var;

  // `error FILE:LINE:COL RULE: <lhs> ⋢ <rhs> writing PROC.VAR`
  std::string render(const std::string& file) const;
};

// Security level of an expression at a process: constants sit at bottom,
// variables at their declared label, calls at the join of their
// arguments. Throws PolicyError on an unlabelled variable.
std::string type_expr(const Policy& policy, const std::string& proc, const Expr& expr);

// Instrumentation hook: invoked for every descent into a nested
// choreography with the pc outside and the pc used inside.
using PcHook =
    std::function<void(const Instruction&, const std::string& pc_in, const std::string& pc_inner)>;

// Checks a runtime-marker-free choreography at the given pc. Returns the
// violated inequalities (empty means well-typed).
std::vector<FlowError> check_chor(const Policy& policy, const Program& prog,
                                  const DeltaContext& delta, const std::string& pc,
                                  const Choreography& chor, const PcHook& hook = {});

struct CheckReport {
  std::vector<FlowError> errors;
  bool delta_consistent = true;
  bool accepted() const { return errors.empty() && delta_consistent; }
};

// Checks main at bottom pc and verifies the context is consistent with
// the procedure bodies (see verify_delta).
CheckReport check_program(const Program& prog, const Policy& policy,
                          const DeltaContext& delta);

// True iff the context is a pre-fixed point of the reconstruction
// operator: regenerating each body's constraints under `delta` yields a
// subset of the recorded set.
bool verify_delta(const Program& prog, const DeltaContext& delta);

}  // namespace chorsec
