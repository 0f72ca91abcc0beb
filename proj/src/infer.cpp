#include "chorsec/infer.hpp"

#include <ostream>
#include <stdexcept>

namespace chorsec {

std::string Constraint::to_text() const {
  std::string out = "{";
  bool first = true;
  for (const auto& atom : bound) {
    if (!first) out += " \xE2\x8A\x94 ";  // ⊔
    first = false;
    out += atom.to_text();
  }
  out += "} \xE2\x8A\x91 ";  // ⊑
  out += target.to_text();
  return out;
}

Bound bound_of_expr(const std::string& proc, const Expr& expr) {
  Bound out;
  if (const auto* v = std::get_if<VarExpr>(&expr.node)) {
    out.insert(Atom::located(proc, v->name));
  } else if (const auto* call = std::get_if<CallExpr>(&expr.node)) {
    for (const auto& arg : call->args) {
      Bound sub = bound_of_expr(proc, arg);
      out.insert(sub.begin(), sub.end());
    }
  }
  return out;
}

std::string eval_bound(const Bound& bound, const Policy& policy, const std::string& pc) {
  std::string level = policy.lattice.bottom();
  for (const auto& atom : bound) {
    const std::string& l = atom.is_eta ? pc : policy.label_of(atom.proc, atom.var);
    level = policy.lattice.join(level, l);
  }
  return level;
}

namespace {

Bound union_of(const Bound& a, const Bound& b) {
  Bound out = a;
  out.insert(b.begin(), b.end());
  return out;
}

Atom rename_atom(const Atom& atom, const std::map<std::string, std::string>& renaming) {
  if (atom.is_eta) return atom;
  auto it = renaming.find(atom.proc);
  if (it == renaming.end()) return atom;
  return Atom::located(it->second, atom.var);
}

// Imports one callee constraint at a call site. Formal processes are
// renamed to the actual ones first; only then is the placeholder
// instantiated with the caller's pc bound. The caller's bound may
// mention processes that happen to share a name with a callee formal,
// so substituting before renaming would corrupt those atoms.
Constraint import_constraint(const Constraint& c,
                             const std::map<std::string, std::string>& renaming,
                             const Bound& pcb) {
  Constraint out;
  out.target = rename_atom(c.target, renaming);
  for (const auto& atom : c.bound) {
    if (atom.is_eta) continue;
    out.bound.insert(rename_atom(atom, renaming));
  }
  if (c.bound.count(Atom::eta())) out.bound.insert(pcb.begin(), pcb.end());
  return out;
}

void gen_rec(const Program& prog, const Choreography& chor, const Bound& pcb,
             const DeltaContext& delta, ConstraintSet& out) {
  for (const auto& instr : chor) {
    if (const auto* a = std::get_if<AssignInstr>(&instr.node)) {
      out.insert({union_of(bound_of_expr(a->proc, a->expr), pcb),
                  Atom::located(a->proc, a->var)});
    } else if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
      out.insert({union_of(bound_of_expr(c->sender, c->expr), pcb),
                  Atom::located(c->receiver, c->var)});
    } else if (const auto* k = std::get_if<CondInstr>(&instr.node)) {
      Bound branch_pcb = union_of(pcb, bound_of_expr(k->proc, k->guard));
      gen_rec(prog, k->then_branch, branch_pcb, delta, out);
      gen_rec(prog, k->else_branch, branch_pcb, delta, out);
    } else if (const auto* call = std::get_if<CallInstr>(&instr.node)) {
      auto entry = delta.find(call->name);
      auto def = prog.procs.find(call->name);
      if (entry == delta.end() || def == prog.procs.end())
        throw std::invalid_argument("constraint generation: call to undefined procedure '" +
                                    call->name + "'");
      std::map<std::string, std::string> renaming;
      for (std::size_t i = 0; i < def->second.formals.size(); ++i)
        renaming[def->second.formals[i]] = call->actuals[i];
      for (const auto& c : entry->second)
        out.insert(import_constraint(c, renaming, pcb));
    } else if (std::holds_alternative<RtCallInstr>(instr.node)) {
      throw std::invalid_argument("constraint generation: runtime call marker in source");
    }
    // selections emit nothing
  }
}

}  // namespace

ConstraintSet gen_constraints(const Program& prog, const Choreography& chor,
                              const Bound& pcb, const DeltaContext& delta) {
  ConstraintSet out;
  gen_rec(prog, chor, pcb, delta, out);
  return out;
}

DeltaContext phi(const Program& prog, const DeltaContext& delta) {
  DeltaContext next;
  for (const auto& [name, def] : prog.procs)
    next[name] = gen_constraints(prog, def.body, Bound{Atom::eta()}, delta);
  return next;
}

namespace {

bool body_has_call(const Choreography& chor) {
  for (const auto& instr : chor) {
    if (std::holds_alternative<CallInstr>(instr.node)) return true;
    if (const auto* k = std::get_if<CondInstr>(&instr.node))
      if (body_has_call(k->then_branch) || body_has_call(k->else_branch)) return true;
  }
  return false;
}

// Upper bound on the length of the increasing chain of contexts: one more
// than the number of expressible constraints (targets × bound sets over
// the located-variable universe plus the placeholder). Saturates instead
// of overflowing.
std::size_t iteration_bound(const Program& prog) {
  const std::size_t nvars = located_vars(prog).size();
  long double bounds = 1.0L;
  for (std::size_t i = 0; i < nvars + 1 && bounds < 1e18L; ++i) bounds *= 2.0L;
  long double total = 1.0L + static_cast<long double>(prog.procs.size()) *
                                 static_cast<long double>(nvars) * bounds;
  if (total > 1e18L) return static_cast<std::size_t>(1e18L);
  return static_cast<std::size_t>(total);
}

}  // namespace

LfpResult lfp(const Program& prog) {
  LfpResult result;
  for (const auto& [name, def] : prog.procs) {
    (void)def;
    result.delta[name] = {};
  }
  bool any_calls = false;
  for (const auto& [name, def] : prog.procs) {
    (void)name;
    if (body_has_call(def.body)) { any_calls = true; break; }
  }
  if (!any_calls) {
    result.delta = phi(prog, result.delta);
    result.iterations = 1;
    result.history.push_back(result.delta);
    return result;
  }
  const std::size_t bound = iteration_bound(prog);
  for (;;) {
    DeltaContext next = phi(prog, result.delta);
    ++result.iterations;
    result.history.push_back(next);
    if (next == result.delta) break;
    result.delta = std::move(next);
    if (static_cast<std::size_t>(result.iterations) > bound)
      throw std::logic_error("context reconstruction exceeded the constraint-universe bound");
  }
  return result;
}

bool delta_member(const DeltaContext& delta, const std::string& proc_name,
                  const std::string& pc, const Policy& policy,
                  const std::map<std::string, std::string>& renaming) {
  auto entry = delta.find(proc_name);
  if (entry == delta.end()) return true;  // no constraints recorded
  for (const auto& c : entry->second) {
    Bound renamed_bound;
    for (const auto& atom : c.bound) renamed_bound.insert(rename_atom(atom, renaming));
    Atom target = rename_atom(c.target, renaming);
    const std::string level = eval_bound(renamed_bound, policy, pc);
    if (!policy.lattice.leq(level, policy.label_of(target.proc, target.var))) return false;
  }
  return true;
}

void render_delta(const DeltaContext& delta, std::ostream& out) {
  for (const auto& [name, constraints] : delta) {
    for (const auto& c : constraints) {
      out << name << ": ";
      bool first = true;
      for (const auto& atom : c.bound) {
        if (!first) out << " | ";
        first = false;
        out << atom.to_text();
      }
      if (c.bound.empty()) out << "bot";
      out << " <= " << c.target.to_text() << "\n";
    }
  }
}

}  // namespace chorsec
