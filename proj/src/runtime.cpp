#include "chorsec/runtime.hpp"

#include <cctype>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "chorsec/rng.hpp"

namespace chorsec {

TransitionLabel TransitionLabel::tau(std::string p) {
  TransitionLabel l;
  l.kind = Kind::Tau;
  l.p = std::move(p);
  return l;
}
TransitionLabel TransitionLabel::com(std::string p, Value v, std::string q) {
  TransitionLabel l;
  l.kind = Kind::Com;
  l.p = std::move(p);
  l.value = std::move(v);
  l.q = std::move(q);
  return l;
}
TransitionLabel TransitionLabel::sel(std::string p, std::string q, std::string label) {
  TransitionLabel l;
  l.kind = Kind::Sel;
  l.p = std::move(p);
  l.q = std::move(q);
  l.sel_label = std::move(label);
  return l;
}
TransitionLabel TransitionLabel::then_at(std::string p) {
  TransitionLabel l;
  l.kind = Kind::Then;
  l.p = std::move(p);
  return l;
}
TransitionLabel TransitionLabel::else_at(std::string p) {
  TransitionLabel l;
  l.kind = Kind::Else;
  l.p = std::move(p);
  return l;
}

std::string TransitionLabel::to_text() const {
  switch (kind) {
    case Kind::Tau: return "tau@" + p;
    case Kind::Com: return "com@" + p + "->" + q + ":" + value.to_text();
    case Kind::Sel: return "sel@" + p + "->" + q + ":" + sel_label;
    case Kind::Then: return "then@" + p;
    case Kind::Else: return "else@" + p;
  }
  return {};
}

std::set<std::string> pn_label(const TransitionLabel& label) {
  switch (label.kind) {
    case TransitionLabel::Kind::Com:
    case TransitionLabel::Kind::Sel:
      return {label.p, label.q};
    default:
      return {label.p};
  }
}

namespace {

bool is_builtin(const std::string& name) {
  static const std::set<std::string> names = {"add", "sub", "mul", "div", "eq", "lt",
                                              "le",  "and", "or",  "not", "concat"};
  return names.count(name) != 0;
}

[[noreturn]] void eval_fail(const std::string& message) { throw EvalError(message); }

void want_arity(const std::string& name, const std::vector<Value>& args, std::size_t n) {
  if (args.size() != n)
    eval_fail("function '" + name + "' expects " + std::to_string(n) + " argument(s), got " +
              std::to_string(args.size()));
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

Value apply_builtin(const std::string& name, const std::vector<Value>& args, bool strict) {
  auto type_mismatch = [&](const Value& neutral) -> Value {
    if (strict) eval_fail("type mismatch in builtin '" + name + "'");
    return neutral;
  };
  if (name == "add" || name == "sub" || name == "mul" || name == "div") {
    want_arity(name, args, 2);
    if (!args[0].is_int() || !args[1].is_int()) return type_mismatch(Value::of_int(0));
    std::int64_t a = args[0].as_int();
    std::int64_t b = args[1].as_int();
    if (name == "add") return Value::of_int(wrap_add(a, b));
    if (name == "sub") return Value::of_int(wrap_sub(a, b));
    if (name == "mul") return Value::of_int(wrap_mul(a, b));
    if (b == 0) {
      if (strict) eval_fail("division by zero");
      return Value::of_int(0);
    }
    if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
      return Value::of_int(a);  // wraps
    return Value::of_int(a / b);
  }
  if (name == "eq") {
    want_arity(name, args, 2);
    return Value::of_bool(args[0] == args[1]);
  }
  if (name == "lt") {
    want_arity(name, args, 2);
    return Value::of_bool(args[0] < args[1]);
  }
  if (name == "le") {
    want_arity(name, args, 2);
    return Value::of_bool(args[0] <= args[1]);
  }
  if (name == "and" || name == "or") {
    want_arity(name, args, 2);
    if (!args[0].is_bool() || !args[1].is_bool()) return type_mismatch(Value::of_bool(false));
    bool a = args[0].as_bool(), b = args[1].as_bool();
    return Value::of_bool(name == "and" ? (a && b) : (a || b));
  }
  if (name == "not") {
    want_arity(name, args, 1);
    if (!args[0].is_bool()) return type_mismatch(Value::of_bool(false));
    return Value::of_bool(!args[0].as_bool());
  }
  // concat
  want_arity(name, args, 2);
  if (!args[0].is_str() || !args[1].is_str()) return type_mismatch(Value::of_str(""));
  return Value::of_str(args[0].as_str() + args[1].as_str());
}

Value apply_extern(const ExternDecl& decl, const std::vector<Value>& args,
                   std::uint64_t fun_seed) {
  std::string encoding = decl.name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) encoding += ",";
    encoding += args[i].to_text();
  }
  encoding += ")";
  std::uint64_t y = mix64(fnv1a64(encoding) ^ mix64(fun_seed));
  switch (decl.result) {
    case ExternDecl::Result::Bool:
      return Value::of_bool((y & 1) != 0);
    case ExternDecl::Result::Int:
      return Value::of_int(static_cast<std::int64_t>(y % 256));
    case ExternDecl::Result::Str: {
      static const char* hex = "0123456789abcdef";
      std::string s(8, '0');
      std::uint64_t bits = y & 0xFFFFFFFFull;
      for (int i = 7; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = hex[bits & 0xF];
        bits >>= 4;
      }
      return Value::of_str(std::move(s));
    }
  }
  eval_fail("unreachable extern result kind");
}

}  // namespace

FunEnv make_fun_env(const Program& prog, const Policy* policy, std::uint64_t fun_seed,
                    bool strict) {
  FunEnv fe;
  fe.fun_seed = fun_seed;
  fe.strict = strict;
  auto add = [&fe](const ExternDecl& decl) {
    if (is_builtin(decl.name))
      throw PolicyError("extern '" + decl.name + "' redeclares a builtin function");
    auto [it, fresh] = fe.externs.emplace(decl.name, decl);
    if (!fresh && !it->second.same_signature(decl))
      throw PolicyError("conflicting extern declaration for '" + decl.name + "'");
  };
  for (const auto& decl : prog.externs) add(decl);
  if (policy)
    for (const auto& decl : policy->externs) add(decl);
  return fe;
}

Value eval_expr(const PStore& sigma, const Expr& expr, const FunEnv& fe) {
  if (const auto* c = std::get_if<ConstExpr>(&expr.node)) return c->value;
  if (const auto* v = std::get_if<VarExpr>(&expr.node)) {
    auto it = sigma.find(v->name);
    if (it == sigma.end()) eval_fail("unbound variable '" + v->name + "'");
    return it->second;
  }
  const auto& call = std::get<CallExpr>(expr.node);
  std::vector<Value> args;
  args.reserve(call.args.size());
  for (const auto& arg : call.args) args.push_back(eval_expr(sigma, arg, fe));
  if (is_builtin(call.function)) return apply_builtin(call.function, args, fe.strict);
  auto decl = fe.externs.find(call.function);
  if (decl == fe.externs.end()) eval_fail("unknown function '" + call.function + "'");
  want_arity(call.function, args, static_cast<std::size_t>(decl->second.arity));
  return apply_extern(decl->second, args, fe.fun_seed);
}

Configuration initial_configuration(const Program& prog, CStore store) {
  return Configuration{prog.main, std::move(store), &prog.procs};
}

namespace {

const PStore& store_of(const CStore& store, const std::string& proc) {
  static const PStore empty;
  auto it = store.find(proc);
  return it == store.end() ? empty : it->second;
}

Choreography splice(const Choreography& chor, std::size_t at, Choreography middle) {
  Choreography out(chor.begin(), chor.begin() + static_cast<std::ptrdiff_t>(at));
  out.insert(out.end(), std::make_move_iterator(middle.begin()),
             std::make_move_iterator(middle.end()));
  out.insert(out.end(), chor.begin() + static_cast<std::ptrdiff_t>(at) + 1, chor.end());
  return out;
}

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a)
    if (b.count(x)) return false;
  return true;
}

void append_path(std::vector<int>& path, const std::vector<int>& more) {
  path.insert(path.end(), more.begin(), more.end());
}

// One derivable transition with the successor store computed but the
// successor choreography deferred. The driver materialises only the
// chosen successor, which keeps long executions of marker-accumulating
// recursions linear in the term size instead of quadratic.
struct Candidate {
  TransitionLabel label;
  std::vector<int> path;
  std::optional<CStore> store;  // nullopt: unchanged
  std::function<Choreography()> build;
};

std::vector<Candidate> enumerate_steps(const Choreography& chor, const CStore& store,
                                       const std::map<std::string, ProcDef>* procs,
                                       const FunEnv& fe) {
  std::vector<Candidate> out;
  const std::set<std::string> everyone = pn_chor(chor);
  std::set<std::string> blocked;

  for (std::size_t i = 0; i < chor.size(); ++i) {
    if (blocked.size() == everyone.size()) break;  // nothing can get past
    const Instruction& instr = chor[i];

    auto admit = [&](TransitionLabel label, std::optional<CStore> next_store,
                     std::vector<int> path, std::function<Choreography()> build) {
      if (!disjoint(pn_label(label), blocked)) return;
      out.push_back(
          Candidate{std::move(label), std::move(path), std::move(next_store), std::move(build)});
    };

    if (const auto* a = std::get_if<AssignInstr>(&instr.node)) {
      if (!blocked.count(a->proc)) {
        Value v = eval_expr(store_of(store, a->proc), a->expr, fe);
        CStore next = store;
        next[a->proc][a->var] = std::move(v);
        admit(TransitionLabel::tau(a->proc), std::move(next), {static_cast<int>(i)},
              [&chor, i] { return splice(chor, i, {}); });
      }
    } else if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
      if (!blocked.count(c->sender) && !blocked.count(c->receiver)) {
        Value v = eval_expr(store_of(store, c->sender), c->expr, fe);
        CStore next = store;
        next[c->receiver][c->var] = v;
        admit(TransitionLabel::com(c->sender, std::move(v), c->receiver), std::move(next),
              {static_cast<int>(i)}, [&chor, i] { return splice(chor, i, {}); });
      }
    } else if (const auto* s = std::get_if<SelInstr>(&instr.node)) {
      admit(TransitionLabel::sel(s->sender, s->receiver, s->label), std::nullopt,
            {static_cast<int>(i)}, [&chor, i] { return splice(chor, i, {}); });
    } else if (const auto* k = std::get_if<CondInstr>(&instr.node)) {
      if (!blocked.count(k->proc)) {
        Value v = eval_expr(store_of(store, k->proc), k->guard, fe);
        const bool taken = v.is_bool() && v.as_bool();
        const Choreography* branch = taken ? &k->then_branch : &k->else_branch;
        admit(taken ? TransitionLabel::then_at(k->proc) : TransitionLabel::else_at(k->proc),
              std::nullopt, {static_cast<int>(i)},
              [&chor, i, branch] { return splice(chor, i, *branch); });
      }
      // Step inside both branches when they can take the same action to
      // the same store, leaving the conditional pending.
      std::vector<Candidate> lefts = enumerate_steps(k->then_branch, store, procs, fe);
      std::vector<Candidate> rights = enumerate_steps(k->else_branch, store, procs, fe);
      auto effective = [&store](const std::optional<CStore>& s) -> const CStore& {
        return s ? *s : store;
      };
      for (const auto& l : lefts) {
        if (pn_label(l.label).count(k->proc)) continue;
        for (const auto& r : rights) {
          if (!(l.label == r.label)) continue;
          if (!(effective(l.store) == effective(r.store))) continue;
          std::vector<int> path{static_cast<int>(i)};
          append_path(path, l.path);
          path.push_back(-1);
          append_path(path, r.path);
          Span span = instr.span;
          admit(l.label, l.store, std::move(path),
                [&chor, i, k, span, lb = l.build, rb = r.build] {
                  CondInstr pending{k->proc, k->guard, lb(), rb()};
                  return splice(chor, i, {Instruction{std::move(pending), span}});
                });
        }
      }
    } else if (const auto* call = std::get_if<CallInstr>(&instr.node)) {
      auto def = procs->find(call->name);
      if (def != procs->end() && def->second.formals.size() == call->actuals.size()) {
        for (std::size_t entering = 0; entering < call->actuals.size(); ++entering) {
          const std::string& r0 = call->actuals[entering];
          if (blocked.count(r0)) continue;
          const ProcDef* body_def = &def->second;
          Span span = instr.span;
          admit(TransitionLabel::tau(r0), std::nullopt,
                {static_cast<int>(i), static_cast<int>(entering)},
                [&chor, i, call, body_def, entering, span] {
                  const Choreography continuation(
                      chor.begin() + static_cast<std::ptrdiff_t>(i) + 1, chor.end());
                  Choreography middle;
                  for (std::size_t j = 0; j < call->actuals.size(); ++j) {
                    if (j == entering) continue;
                    middle.push_back(Instruction{
                        RtCallInstr{call->actuals[j], call->name, call->actuals, continuation},
                        span});
                  }
                  std::map<std::string, std::string> renaming;
                  for (std::size_t j = 0; j < body_def->formals.size(); ++j)
                    renaming[body_def->formals[j]] = call->actuals[j];
                  Choreography body = rename_processes(body_def->body, renaming);
                  middle.insert(middle.end(), std::make_move_iterator(body.begin()),
                                std::make_move_iterator(body.end()));
                  return splice(chor, i, std::move(middle));
                });
        }
      }
      // An undefined procedure or arity mismatch has no applicable rule;
      // validated programs never reach this, hand-built ones go stuck.
    } else {
      const auto& rt = std::get<RtCallInstr>(instr.node);
      if (!blocked.count(rt.waiting))
        admit(TransitionLabel::tau(rt.waiting), std::nullopt, {static_cast<int>(i)},
              [&chor, i] { return splice(chor, i, {}); });
    }

    auto names = pn_instr(instr);
    blocked.insert(names.begin(), names.end());
  }
  return out;
}

}  // namespace

std::vector<Transition> enabled(const Configuration& cfg, const FunEnv& fe) {
  std::vector<Transition> out;
  for (auto& c : enumerate_steps(cfg.chor, cfg.store, cfg.procs, fe)) {
    Choreography next_chor = c.build();
    CStore next_store = c.store ? std::move(*c.store) : cfg.store;
    out.push_back(Transition{std::move(c.label),
                             Configuration{std::move(next_chor), std::move(next_store),
                                           cfg.procs},
                             std::move(c.path)});
  }
  return out;
}

Transition step(const Configuration& cfg, const FunEnv& fe, std::size_t index) {
  if (cfg.chor.empty()) throw StepError(StepError::Kind::Terminated, "terminated");
  auto options = enumerate_steps(cfg.chor, cfg.store, cfg.procs, fe);
  if (options.empty()) {
    std::string why = "stuck: no enabled transitions";
    if (const auto* call = std::get_if<CallInstr>(&cfg.chor.front().node)) {
      if (!cfg.procs || !cfg.procs->count(call->name))
        why += " (call to undefined procedure '" + call->name + "')";
      else
        why += " (arity mismatch in call to '" + call->name + "')";
    }
    throw StepError(StepError::Kind::Stuck, why);
  }
  if (index >= options.size())
    throw StepError(StepError::Kind::BadIndex,
                    "choice " + std::to_string(index) + " out of range (enabled: " +
                        std::to_string(options.size()) + ")");
  Candidate& chosen = options[index];
  Choreography next_chor = chosen.build();
  CStore next_store = chosen.store ? std::move(*chosen.store) : cfg.store;
  return Transition{std::move(chosen.label),
                    Configuration{std::move(next_chor), std::move(next_store), cfg.procs},
                    std::move(chosen.path)};
}

Scheduler make_scheduler(SchedKind kind, std::uint64_t seed) {
  if (kind == SchedKind::Deterministic)
    return [](std::size_t) -> std::size_t { return 0; };
  auto rng = std::make_shared<SplitMix64>(seed);
  return [rng](std::size_t n) -> std::size_t {
    return static_cast<std::size_t>(rng->next() % n);
  };
}

Outcome run(Configuration cfg, const FunEnv& fe, Scheduler& scheduler, std::size_t max_steps) {
  Outcome out;
  for (;;) {
    if (cfg.chor.empty()) {
      out.kind = Outcome::Kind::Terminated;
      out.store = std::move(cfg.store);
      return out;
    }
    if (out.trace.size() >= max_steps) {
      out.kind = Outcome::Kind::Cutoff;
      out.store = std::move(cfg.store);
      out.diagnostic = "step budget exhausted";
      return out;
    }
    std::vector<Candidate> options;
    try {
      options = enumerate_steps(cfg.chor, cfg.store, cfg.procs, fe);
    } catch (const EvalError& e) {
      out.kind = Outcome::Kind::Stuck;
      out.store = std::move(cfg.store);
      out.diagnostic = std::string("evaluation error: ") + e.what();
      return out;
    }
    if (options.empty()) {
      out.kind = Outcome::Kind::Stuck;
      out.store = std::move(cfg.store);
      out.diagnostic = "no enabled transitions";
      if (const auto* call = std::get_if<CallInstr>(&cfg.chor.front().node))
        out.diagnostic += " (call to '" + call->name + "' has no definition of matching arity)";
      return out;
    }
    Candidate& chosen = options[scheduler(options.size())];
    out.trace.push_back(chosen.label);
    // materialise before touching cfg: the builder reads cfg's term
    Choreography next_chor = chosen.build();
    cfg.chor = std::move(next_chor);
    if (chosen.store) cfg.store = std::move(*chosen.store);
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Value parse_store_value(const std::string& text, int lineno) {
  if (text == "true") return Value::of_bool(true);
  if (text == "false") return Value::of_bool(false);
  if (!text.empty() && text.front() == '"') {
    if (text.size() < 2 || text.back() != '"')
      throw ParseError({lineno, 1}, "unterminated string in store file");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '\\') {
        if (i + 2 >= text.size())
          throw ParseError({lineno, 1}, "bad escape in store file string");
        char esc = text[++i];
        switch (esc) {
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: throw ParseError({lineno, 1}, "bad escape in store file string");
        }
      } else {
        out += c;
      }
    }
    return Value::of_str(std::move(out));
  }
  try {
    std::size_t pos = 0;
    long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("");
    return Value::of_int(v);
  } catch (const std::exception&) {
    throw ParseError({lineno, 1}, "bad value '" + text + "' in store file");
  }
}

}  // namespace

CStore parse_store(std::string_view text) {
  CStore store;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError({lineno, 1}, "expected 'PROC.VAR = VALUE'");
    std::string lhs = trim(line.substr(0, eq));
    std::string rhs = trim(line.substr(eq + 1));
    auto dot = lhs.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
      throw ParseError({lineno, 1}, "store target must have form PROC.VAR");
    store[lhs.substr(0, dot)][lhs.substr(dot + 1)] = parse_store_value(rhs, lineno);
  }
  return store;
}

void print_store(const CStore& store, std::ostream& out) {
  for (const auto& [proc, vars] : store)
    for (const auto& [var, value] : vars)
      out << proc << "." << var << " = " << value.to_text() << "\n";
}

}  // namespace chorsec
