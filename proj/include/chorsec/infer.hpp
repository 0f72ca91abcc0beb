// Procedure-context reconstruction: symbolic bounds over located
// variables and the pc placeholder, constraint generation by recursion
// over choreographies, the per-pass operator over constraint contexts,
// its least fixed point by Kleene iteration, and the membership
// predicate that lets the type checker consult the reconstructed
// context at call sites.
#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chorsec/ast.hpp"
#include "chorsec/lattice.hpp"

namespace chorsec {

// A bound atom: a located variable, or the distinguished pc placeholder.
// Ordered with the placeholder last so bound sets print canonically.
struct Atom {
  bool is_eta = false;
  std::string proc;
  std::string var;

  static Atom eta() { return Atom{true, {}, {}}; }
  static Atom located(std::string proc, std::string var) {
    return Atom{false, std::move(proc), std::move(var)};
  }

  auto operator<=>(const Atom&) const = default;
  std::string to_text() const { return is_eta ? "pc" : proc + "." + var; }
};

// Finite set of atoms denoting their join; the empty set denotes bottom.
using Bound = std::set<Atom>;

// Ψ ⊑ p.x
struct Constraint {
  Bound bound;
  Atom target;  // always a located variable

  auto operator<=>(const Constraint&) const = default;
  std::string to_text() const;
};

using ConstraintSet = std::set<Constraint>;

// Maps each procedure name to its constraint set; total over the defined
// procedures of a program (missing entries start empty).
using DeltaContext = std::map<std::string, ConstraintSet>;

// Symbolic security level of an expression evaluated at `proc`:
// constants contribute nothing, variables their own location, calls the
// union of their arguments.
Bound bound_of_expr(const std::string& proc, const Expr& expr);

// Joins the labels of the atoms, reading located variables from the
// policy and the placeholder as `pc`. The empty bound is bottom.
std::string eval_bound(const Bound& bound, const Policy& policy, const std::string& pc);

// Emits the flow constraints of a choreography under a symbolic pc bound.
// Writes emit (expression bound ∪ pcb) ⊑ target; conditionals extend the
// pc bound of their branches by the guard's bound; calls import the
// callee's constraint set from `delta`, renaming formal processes to the
// actual ones and instantiating the placeholder with the caller's pcb.
// Calling an undefined procedure throws.
ConstraintSet gen_constraints(const Program& prog, const Choreography& chor,
                              const Bound& pcb, const DeltaContext& delta);

// One reconstruction pass: regenerates every procedure's constraint set
// from its body under the given context.
DeltaContext phi(const Program& prog, const DeltaContext& delta);

struct LfpResult {
  DeltaContext delta;
  int iterations = 0;
  std::vector<DeltaContext> history;  // context after each pass
};

// Least fixed point of the reconstruction operator, reached by Kleene
// iteration from the all-empty context. When no procedure body contains
// a call the operator ignores its argument and a single pass suffices;
// otherwise passes repeat until one leaves the context unchanged, and
// the count includes that confirming pass.
LfpResult lfp(const Program& prog);

// True iff every constraint of the procedure, with formal processes
// renamed through `renaming`, is satisfied by the policy's labelling at
// program-counter `pc`.
bool delta_member(const DeltaContext& delta, const std::string& proc_name,
                  const std::string& pc, const Policy& policy,
                  const std::map<std::string, std::string>& renaming);

// One line per constraint: `X: a1 | ... | ak <= p.x`, with the
// placeholder printed as `pc`.
void render_delta(const DeltaContext& delta, std::ostream& out);

}  // namespace chorsec
