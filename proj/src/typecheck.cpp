#include "chorsec/typecheck.hpp"

#include <algorithm>

namespace chorsec {

std::string FlowError::render(const std::string& file) const {
  return "error " + file + ":" + std::to_string(span.line) + ":" + std::to_string(span.col) +
         " " + rule + ": " + computed + " \xE2\x8B\xA2 " + target_label + " writing " + proc +
         "." + var;  // ⋢
}

std::string type_expr(const Policy& policy, const std::string& proc, const Expr& expr) {
  if (std::holds_alternative<ConstExpr>(expr.node)) return policy.lattice.bottom();
  if (const auto* v = std::get_if<VarExpr>(&expr.node)) return policy.label_of(proc, v->name);
  const auto& call = std::get<CallExpr>(expr.node);
  std::string level = policy.lattice.bottom();
  for (const auto& arg : call.args)
    level = policy.lattice.join(level, type_expr(policy, proc, arg));
  return level;
}

namespace {

struct Checker {
  const Policy& policy;
  const Program& prog;
  const DeltaContext& delta;
  const PcHook& hook;
  std::vector<FlowError> errors;

  void check_write(const Span& span, const std::string& rule, const std::string& expr_label,
                   const std::string& pc, const std::string& proc, const std::string& var) {
    const std::string computed = policy.lattice.join(expr_label, pc);
    const std::string& target = policy.label_of(proc, var);
    if (policy.lattice.leq(computed, target)) return;
    errors.push_back({span, rule, expr_label, pc, computed, target, proc, var});
  }

  void check(const Choreography& chor, const std::string& pc) {
    for (const auto& instr : chor) {
      if (const auto* a = std::get_if<AssignInstr>(&instr.node)) {
        check_write(instr.span, "t-local", type_expr(policy, a->proc, a->expr), pc, a->proc,
                    a->var);
      } else if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
        check_write(instr.span, "t-com", type_expr(policy, c->sender, c->expr), pc, c->receiver,
                    c->var);
      } else if (std::holds_alternative<SelInstr>(instr.node)) {
        // selections carry no data flow
      } else if (const auto* k = std::get_if<CondInstr>(&instr.node)) {
        const std::string guard_level = type_expr(policy, k->proc, k->guard);
        const std::string inner = policy.lattice.join(guard_level, pc);
        if (hook) hook(instr, pc, inner);
        check(k->then_branch, inner);
        check(k->else_branch, inner);
      } else if (const auto* call = std::get_if<CallInstr>(&instr.node)) {
        check_call(instr.span, *call, pc);
      } else {
        errors.push_back({instr.span, "t-proc", policy.lattice.bottom(), pc,
                          policy.lattice.bottom(), policy.lattice.bottom(),
                          std::get<RtCallInstr>(instr.node).waiting,
                          "<runtime call marker is untypeable>"});
      }
    }
  }

  void check_call(const Span& span, const CallInstr& call, const std::string& pc) {
    auto def = prog.procs.find(call.name);
    auto entry = delta.find(call.name);
    if (def == prog.procs.end()) {
      errors.push_back({span, "t-proc", policy.lattice.bottom(), pc, policy.lattice.bottom(),
                        policy.lattice.bottom(), call.name, "<undefined procedure>"});
      return;
    }
    std::map<std::string, std::string> renaming;
    for (std::size_t i = 0; i < def->second.formals.size(); ++i)
      renaming[def->second.formals[i]] = call.actuals[i];
    if (entry == delta.end()) return;
    for (const auto& c : entry->second) {
      Bound renamed;
      for (const auto& atom : c.bound) {
        if (atom.is_eta) {
          renamed.insert(atom);
          continue;
        }
        auto it = renaming.find(atom.proc);
        renamed.insert(it == renaming.end() ? atom : Atom::located(it->second, atom.var));
      }
      Atom target = c.target;
      if (auto it = renaming.find(target.proc); it != renaming.end())
        target = Atom::located(it->second, target.var);
      const std::string level = eval_bound(renamed, policy, pc);
      const std::string& target_label = policy.label_of(target.proc, target.var);
      if (policy.lattice.leq(level, target_label)) continue;
      errors.push_back(
          {span, "t-proc", level, pc, level, target_label, target.proc, target.var});
    }
  }
};

}  // namespace

std::vector<FlowError> check_chor(const Policy& policy, const Program& prog,
                                  const DeltaContext& delta, const std::string& pc,
                                  const Choreography& chor, const PcHook& hook) {
  Checker checker{policy, prog, delta, hook, {}};
  checker.check(chor, pc);
  return std::move(checker.errors);
}

CheckReport check_program(const Program& prog, const Policy& policy,
                          const DeltaContext& delta) {
  CheckReport report;
  report.errors = check_chor(policy, prog, delta, policy.lattice.bottom(), prog.main);
  report.delta_consistent = verify_delta(prog, delta);
  return report;
}

bool verify_delta(const Program& prog, const DeltaContext& delta) {
  for (const auto& [name, def] : prog.procs) {
    ConstraintSet regenerated = gen_constraints(prog, def.body, Bound{Atom::eta()}, delta);
    auto entry = delta.find(name);
    const ConstraintSet empty;
    const ConstraintSet& recorded = entry == delta.end() ? empty : entry->second;
    if (!std::includes(recorded.begin(), recorded.end(), regenerated.begin(),
                       regenerated.end()))
      return false;
  }
  return true;
}

}  // namespace chorsec
