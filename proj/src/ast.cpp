#include "chorsec/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace chorsec {

Expr Expr::constant(Value v, Span s) { return Expr{ConstExpr{std::move(v)}, s}; }
Expr Expr::var(std::string name, Span s) { return Expr{VarExpr{std::move(name)}, s}; }
Expr Expr::call(std::string fn, std::vector<Expr> args, Span s) {
  return Expr{CallExpr{std::move(fn), std::move(args)}, s};
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* c = std::get_if<ConstExpr>(&a.node))
    return c->value == std::get<ConstExpr>(b.node).value;
  if (const auto* v = std::get_if<VarExpr>(&a.node))
    return v->name == std::get<VarExpr>(b.node).name;
  const auto& ca = std::get<CallExpr>(a.node);
  const auto& cb = std::get<CallExpr>(b.node);
  return ca.function == cb.function &&
         std::equal(ca.args.begin(), ca.args.end(), cb.args.begin(), cb.args.end());
}

bool chor_equal(const Choreography& a, const Choreography& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Instruction& x, const Instruction& y) { return x == y; });
}

bool operator==(const Instruction& a, const Instruction& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* x = std::get_if<ComInstr>(&a.node)) {
    const auto& y = std::get<ComInstr>(b.node);
    return x->sender == y.sender && x->expr == y.expr && x->receiver == y.receiver &&
           x->var == y.var;
  }
  if (const auto* x = std::get_if<SelInstr>(&a.node)) {
    const auto& y = std::get<SelInstr>(b.node);
    return x->sender == y.sender && x->receiver == y.receiver && x->label == y.label;
  }
  if (const auto* x = std::get_if<AssignInstr>(&a.node)) {
    const auto& y = std::get<AssignInstr>(b.node);
    return x->proc == y.proc && x->var == y.var && x->expr == y.expr;
  }
  if (const auto* x = std::get_if<CondInstr>(&a.node)) {
    const auto& y = std::get<CondInstr>(b.node);
    return x->proc == y.proc && x->guard == y.guard &&
           chor_equal(x->then_branch, y.then_branch) &&
           chor_equal(x->else_branch, y.else_branch);
  }
  if (const auto* x = std::get_if<CallInstr>(&a.node)) {
    const auto& y = std::get<CallInstr>(b.node);
    return x->name == y.name && x->actuals == y.actuals;
  }
  const auto& x = std::get<RtCallInstr>(a.node);
  const auto& y = std::get<RtCallInstr>(b.node);
  return x.waiting == y.waiting && x.name == y.name && x.actuals == y.actuals &&
         chor_equal(x.continuation, y.continuation);
}

bool operator==(const Program& a, const Program& b) {
  if (a.externs.size() != b.externs.size()) return false;
  for (std::size_t i = 0; i < a.externs.size(); ++i)
    if (!a.externs[i].same_signature(b.externs[i])) return false;
  if (a.procs.size() != b.procs.size()) return false;
  for (auto ia = a.procs.begin(), ib = b.procs.begin(); ia != a.procs.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second.formals != ib->second.formals) return false;
    if (!chor_equal(ia->second.body, ib->second.body)) return false;
  }
  return chor_equal(a.main, b.main);
}

std::set<std::string> pn_instr(const Instruction& instr) {
  std::set<std::string> out;
  if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
    out.insert(c->sender);
    out.insert(c->receiver);
  } else if (const auto* s = std::get_if<SelInstr>(&instr.node)) {
    out.insert(s->sender);
    out.insert(s->receiver);
  } else if (const auto* a = std::get_if<AssignInstr>(&instr.node)) {
    out.insert(a->proc);
  } else if (const auto* k = std::get_if<CondInstr>(&instr.node)) {
    out.insert(k->proc);
    auto merge = [&out](const std::set<std::string>& more) { out.insert(more.begin(), more.end()); };
    merge(pn_chor(k->then_branch));
    merge(pn_chor(k->else_branch));
  } else if (const auto* call = std::get_if<CallInstr>(&instr.node)) {
    out.insert(call->actuals.begin(), call->actuals.end());
  } else {
    // Only the waiting process is blocked by a runtime call marker.
    out.insert(std::get<RtCallInstr>(instr.node).waiting);
  }
  return out;
}

std::set<std::string> pn_chor(const Choreography& chor) {
  std::set<std::string> out;
  for (const auto& instr : chor) {
    auto names = pn_instr(instr);
    out.insert(names.begin(), names.end());
  }
  return out;
}

Choreography graft(Choreography chor, const Choreography& continuation) {
  chor.insert(chor.end(), continuation.begin(), continuation.end());
  return chor;
}

namespace {

const std::string& renamed(const std::map<std::string, std::string>& renaming,
                           const std::string& name) {
  auto it = renaming.find(name);
  if (it == renaming.end())
    throw std::invalid_argument("renaming does not cover process '" + name + "'");
  return it->second;
}

}  // namespace

Choreography rename_processes(const Choreography& chor,
                              const std::map<std::string, std::string>& renaming) {
  {
    std::set<std::string> targets;
    for (const auto& [from, to] : renaming) {
      (void)from;
      if (!targets.insert(to).second)
        throw std::invalid_argument("renaming is not injective on '" + to + "'");
    }
  }
  Choreography out;
  out.reserve(chor.size());
  for (const auto& instr : chor) {
    Instruction copy = instr;
    if (auto* c = std::get_if<ComInstr>(&copy.node)) {
      c->sender = renamed(renaming, c->sender);
      c->receiver = renamed(renaming, c->receiver);
    } else if (auto* s = std::get_if<SelInstr>(&copy.node)) {
      s->sender = renamed(renaming, s->sender);
      s->receiver = renamed(renaming, s->receiver);
    } else if (auto* a = std::get_if<AssignInstr>(&copy.node)) {
      a->proc = renamed(renaming, a->proc);
    } else if (auto* k = std::get_if<CondInstr>(&copy.node)) {
      k->proc = renamed(renaming, k->proc);
      k->then_branch = rename_processes(k->then_branch, renaming);
      k->else_branch = rename_processes(k->else_branch, renaming);
    } else if (auto* call = std::get_if<CallInstr>(&copy.node)) {
      for (auto& actual : call->actuals) actual = renamed(renaming, actual);
    } else {
      auto& rt = std::get<RtCallInstr>(copy.node);
      rt.waiting = renamed(renaming, rt.waiting);
      for (auto& actual : rt.actuals) actual = renamed(renaming, actual);
      rt.continuation = rename_processes(rt.continuation, renaming);
    }
    out.push_back(std::move(copy));
  }
  return out;
}

namespace {

bool is_builtin_name(const std::string& name) {
  static const std::set<std::string> builtins = {"add", "sub", "mul",    "div", "eq", "lt",
                                                 "le",  "and", "or",     "not", "concat"};
  return builtins.count(name) != 0;
}

void validate_chor(const Program& prog, const Choreography& chor,
                   std::vector<Diagnostic>& diags) {
  for (const auto& instr : chor) {
    if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
      if (c->sender == c->receiver)
        diags.push_back({instr.span, "communication endpoints must be distinct processes"});
    } else if (const auto* s = std::get_if<SelInstr>(&instr.node)) {
      if (s->sender == s->receiver)
        diags.push_back({instr.span, "selection endpoints must be distinct processes"});
    } else if (const auto* k = std::get_if<CondInstr>(&instr.node)) {
      validate_chor(prog, k->then_branch, diags);
      validate_chor(prog, k->else_branch, diags);
    } else if (const auto* call = std::get_if<CallInstr>(&instr.node)) {
      auto def = prog.procs.find(call->name);
      if (def == prog.procs.end()) {
        diags.push_back({instr.span, "call to undefined procedure '" + call->name + "'"});
      } else if (def->second.formals.size() != call->actuals.size()) {
        diags.push_back({instr.span, "procedure '" + call->name + "' expects " +
                                         std::to_string(def->second.formals.size()) +
                                         " process(es), got " +
                                         std::to_string(call->actuals.size())});
      }
      std::set<std::string> seen;
      for (const auto& actual : call->actuals)
        if (!seen.insert(actual).second)
          diags.push_back({instr.span, "duplicate actual process '" + actual + "' in call to '" +
                                           call->name + "'"});
    } else if (std::holds_alternative<RtCallInstr>(instr.node)) {
      diags.push_back({instr.span, "runtime call marker is not valid in source"});
    }
  }
}

void scan_expr_vars(const std::string& proc, const Expr& expr,
                    std::set<std::pair<std::string, std::string>>& out) {
  if (const auto* v = std::get_if<VarExpr>(&expr.node)) {
    out.emplace(proc, v->name);
  } else if (const auto* c = std::get_if<CallExpr>(&expr.node)) {
    for (const auto& arg : c->args) scan_expr_vars(proc, arg, out);
  }
}

// Scans one choreography with processes renamed through `subst` (identity
// entries for top-level scans). Call instructions recurse into the callee
// body under the composed renaming; `visited` cuts recursive cycles.
void scan_chor_vars(const Program& prog, const Choreography& chor,
                    const std::map<std::string, std::string>& subst,
                    std::set<std::pair<std::string, std::string>>& out,
                    std::set<std::pair<std::string, std::vector<std::string>>>& visited,
                    bool follow_calls) {
  auto resolve = [&subst](const std::string& name) {
    auto it = subst.find(name);
    return it == subst.end() ? name : it->second;
  };
  for (const auto& instr : chor) {
    if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
      scan_expr_vars(resolve(c->sender), c->expr, out);
      out.emplace(resolve(c->receiver), c->var);
    } else if (const auto* a = std::get_if<AssignInstr>(&instr.node)) {
      out.emplace(resolve(a->proc), a->var);
      scan_expr_vars(resolve(a->proc), a->expr, out);
    } else if (const auto* k = std::get_if<CondInstr>(&instr.node)) {
      scan_expr_vars(resolve(k->proc), k->guard, out);
      scan_chor_vars(prog, k->then_branch, subst, out, visited, follow_calls);
      scan_chor_vars(prog, k->else_branch, subst, out, visited, follow_calls);
    } else if (const auto* call = std::get_if<CallInstr>(&instr.node)) {
      if (!follow_calls) continue;
      auto def = prog.procs.find(call->name);
      if (def == prog.procs.end()) continue;
      if (def->second.formals.size() != call->actuals.size()) continue;
      std::vector<std::string> resolved;
      resolved.reserve(call->actuals.size());
      for (const auto& actual : call->actuals) resolved.push_back(resolve(actual));
      if (!visited.emplace(call->name, resolved).second) continue;
      std::map<std::string, std::string> inner;
      for (std::size_t i = 0; i < resolved.size(); ++i)
        inner[def->second.formals[i]] = resolved[i];
      scan_chor_vars(prog, def->second.body, inner, out, visited, follow_calls);
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_program(const Program& prog) {
  std::vector<Diagnostic> diags;
  for (const auto& decl : prog.externs)
    if (is_builtin_name(decl.name))
      diags.push_back({decl.span, "extern '" + decl.name + "' redeclares a builtin function"});
  for (const auto& [name, def] : prog.procs) {
    std::set<std::string> formals;
    for (const auto& f : def.formals)
      if (!formals.insert(f).second)
        diags.push_back({def.span, "duplicate formal process '" + f + "' in '" + name + "'"});
    for (const auto& p : pn_chor(def.body))
      if (!formals.count(p))
        diags.push_back({def.span, "procedure '" + name + "' mentions process '" + p +
                                       "' outside its formal parameters"});
    validate_chor(prog, def.body, diags);
  }
  validate_chor(prog, prog.main, diags);
  return diags;
}

std::set<std::pair<std::string, std::string>> located_vars(const Program& prog) {
  std::set<std::pair<std::string, std::string>> out;
  std::set<std::pair<std::string, std::vector<std::string>>> visited;
  std::map<std::string, std::string> identity;
  // Bodies under their formal names (the constraint-atom universe).
  for (const auto& [name, def] : prog.procs) {
    (void)name;
    scan_chor_vars(prog, def.body, identity, out, visited, /*follow_calls=*/false);
  }
  // Main plus the instantiation closure of reachable calls, covering the
  // variables actually touched at run time.
  scan_chor_vars(prog, prog.main, identity, out, visited, /*follow_calls=*/true);
  return out;
}

std::string render_diagnostics(const std::vector<Diagnostic>& diags, const std::string& file) {
  std::string out;
  for (const auto& d : diags) {
    out += "error " + file + ":" + std::to_string(d.span.line) + ":" +
           std::to_string(d.span.col) + ": " + d.message + "\n";
  }
  return out;
}

}  // namespace chorsec
