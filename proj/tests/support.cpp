#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chorsec::test {

std::string fixture_path(const std::string& name) {
  return std::string(TESTDATA_DIR) + "/" + name;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Program parse_valid(const std::string& source) {
  Program prog = parse_program(source);
  auto diags = validate_program(prog);
  if (!diags.empty()) throw std::runtime_error("invalid program: " + diags.front().message);
  return prog;
}

const std::vector<NamedLattice>& test_lattices() {
  static const std::vector<NamedLattice> lattices = [] {
    std::vector<NamedLattice> out;
    out.push_back({"two-point", Lattice::make({"Low", "High"}, "Low", {{"Low", "High"}})});
    out.push_back({"chain3", Lattice::make({"L", "M", "H"}, "L", {{"L", "M"}, {"M", "H"}})});
    out.push_back({"diamond", Lattice::make({"Low", "A", "B", "Top"}, "Low",
                                            {{"Low", "A"}, {"Low", "B"}, {"A", "Top"},
                                             {"B", "Top"}})});
    out.push_back({"m3", Lattice::make({"bot", "a", "b", "c", "top"}, "bot",
                                       {{"bot", "a"},
                                        {"bot", "b"},
                                        {"bot", "c"},
                                        {"a", "top"},
                                        {"b", "top"},
                                        {"c", "top"}})});
    out.push_back({"n5", Lattice::make({"bot", "a", "b", "c", "top"}, "bot",
                                       {{"bot", "a"},
                                        {"a", "b"},
                                        {"b", "top"},
                                        {"bot", "c"},
                                        {"c", "top"}})});
    out.push_back({"six", Lattice::make({"bot", "a", "b", "c", "d", "top"}, "bot",
                                        {{"bot", "a"},
                                         {"bot", "b"},
                                         {"a", "c"},
                                         {"b", "c"},
                                         {"c", "top"},
                                         {"bot", "d"},
                                         {"d", "top"}})});
    return out;
  }();
  return lattices;
}

const Lattice& two_point() { return test_lattices()[0].lattice; }
const Lattice& diamond() { return test_lattices()[2].lattice; }

namespace {

const std::vector<std::string> kProcPool = {"p", "q", "r", "s"};
const std::vector<std::string> kVarPool = {"x", "y", "z"};

std::vector<std::string> pick_distinct(SplitMix64& rng, const std::vector<std::string>& pool,
                                       std::size_t n) {
  std::vector<std::string> bag = pool;
  // Fisher-Yates prefix
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(bag.size() - i));
    std::swap(bag[i], bag[j]);
  }
  bag.resize(n);
  return bag;
}

struct GenContext {
  const Program* prog;  // for declared procedures (filled before bodies)
  std::vector<std::string> scope;
  bool has_exists = false;
  bool has_mix = false;
};

Expr gen_expr(SplitMix64& rng, const GenContext& ctx, int depth) {
  std::uint64_t roll = rng.below(100);
  if (depth >= 2) roll %= 65;  // constants and variables only
  if (roll < 25) return Expr::constant(Value::of_int(static_cast<std::int64_t>(rng.below(4))));
  if (roll < 35) return Expr::constant(Value::of_bool(rng.below(2) == 0));
  if (roll < 45) return Expr::constant(Value::of_str(rng.below(2) == 0 ? "go" : "hi"));
  if (roll < 65) return Expr::var(kVarPool[rng.below(kVarPool.size())]);
  if (roll < 80 || (!ctx.has_exists && !ctx.has_mix)) {
    switch (rng.below(4)) {
      case 0:
        return Expr::call("add", {gen_expr(rng, ctx, depth + 1), gen_expr(rng, ctx, depth + 1)});
      case 1:
        return Expr::call("eq", {gen_expr(rng, ctx, depth + 1), gen_expr(rng, ctx, depth + 1)});
      case 2:
        return Expr::call("not", {gen_expr(rng, ctx, depth + 1)});
      default:
        return Expr::call("concat",
                          {gen_expr(rng, ctx, depth + 1), gen_expr(rng, ctx, depth + 1)});
    }
  }
  if (ctx.has_exists && (!ctx.has_mix || rng.below(2) == 0))
    return Expr::call("exists", {gen_expr(rng, ctx, depth + 1)});
  return Expr::call("mix", {gen_expr(rng, ctx, depth + 1), gen_expr(rng, ctx, depth + 1)});
}

Choreography gen_chor(SplitMix64& rng, const GenContext& ctx, int& budget, int depth);

Instruction gen_instr(SplitMix64& rng, const GenContext& ctx, int& budget, int depth) {
  for (;;) {
    std::uint64_t roll = rng.below(100);
    if (roll < 30) {
      const std::string& p = ctx.scope[rng.below(ctx.scope.size())];
      return {AssignInstr{p, kVarPool[rng.below(kVarPool.size())], gen_expr(rng, ctx, 0)}, {}};
    }
    if (roll < 55) {
      if (ctx.scope.size() < 2) continue;
      auto pq = pick_distinct(rng, ctx.scope, 2);
      return {ComInstr{pq[0], gen_expr(rng, ctx, 0), pq[1],
                       kVarPool[rng.below(kVarPool.size())]},
              {}};
    }
    if (roll < 63) {
      if (ctx.scope.size() < 2) continue;
      auto pq = pick_distinct(rng, ctx.scope, 2);
      return {SelInstr{pq[0], pq[1], rng.below(2) == 0 ? "ok" : "ko"}, {}};
    }
    if (roll < 83) {
      if (depth >= 2 || budget < 1) continue;
      CondInstr cond;
      cond.proc = ctx.scope[rng.below(ctx.scope.size())];
      cond.guard = gen_expr(rng, ctx, 0);
      cond.then_branch = gen_chor(rng, ctx, budget, depth + 1);
      cond.else_branch = gen_chor(rng, ctx, budget, depth + 1);
      return {std::move(cond), {}};
    }
    // procedure call, if any fits the scope
    std::vector<std::string> callable;
    for (const auto& [name, def] : ctx.prog->procs)
      if (def.formals.size() <= ctx.scope.size()) callable.push_back(name);
    if (callable.empty()) continue;
    const std::string& callee = callable[rng.below(callable.size())];
    auto arity = ctx.prog->procs.at(callee).formals.size();
    return {CallInstr{callee, pick_distinct(rng, ctx.scope, arity)}, {}};
  }
}

Choreography gen_chor(SplitMix64& rng, const GenContext& ctx, int& budget, int depth) {
  Choreography out;
  std::uint64_t len = rng.below(3) + (depth == 0 ? 1 : 0);
  for (std::uint64_t i = 0; i < len && budget > 0; ++i) {
    --budget;
    out.push_back(gen_instr(rng, ctx, budget, depth));
  }
  return out;
}

}  // namespace

Program gen_program(SplitMix64& rng) {
  Program prog;
  bool has_exists = rng.below(2) == 0;
  bool has_mix = rng.below(4) == 0;
  if (has_exists)
    prog.externs.push_back({"exists", 1, ExternDecl::Result::Bool, {}});
  if (has_mix) prog.externs.push_back({"mix", 2, ExternDecl::Result::Int, {}});

  std::uint64_t nprocs = rng.below(3);  // 0..2 definitions
  static const std::vector<std::string> proc_names = {"X", "Y"};
  // declare names and formals first so bodies can call anything defined
  for (std::uint64_t i = 0; i < nprocs; ++i) {
    ProcDef def;
    def.formals = pick_distinct(rng, kProcPool, 1 + rng.below(2));
    prog.procs.emplace(proc_names[i], std::move(def));
  }
  int budget = 12;
  for (auto& [name, def] : prog.procs) {
    (void)name;
    GenContext ctx{&prog, def.formals, has_exists, has_mix};
    int body_budget = std::min(budget, 3);
    budget -= body_budget;
    def.body = gen_chor(rng, ctx, body_budget, 1);
  }
  GenContext ctx{&prog, pick_distinct(rng, kProcPool, 2 + rng.below(2)), has_exists, has_mix};
  int main_budget = std::max(budget, 1);
  ctx.prog = &prog;
  prog.main = gen_chor(rng, ctx, main_budget, 0);
  return prog;
}

Policy gen_policy(const Program& prog, const Lattice& lattice, SplitMix64& rng) {
  Policy pol;
  pol.lattice = lattice;
  const auto& elems = lattice.elements();
  pol.low = elems[rng.below(elems.size())];

  std::set<std::string> procs(kProcPool.begin(), kProcPool.end());
  for (const auto& p : pn_chor(prog.main)) procs.insert(p);
  for (const auto& [name, def] : prog.procs) {
    (void)name;
    for (const auto& f : def.formals) procs.insert(f);
  }
  std::set<std::string> vars(kVarPool.begin(), kVarPool.end());
  for (const auto& [p, x] : located_vars(prog)) {
    procs.insert(p);
    vars.insert(x);
  }
  for (const auto& p : procs)
    for (const auto& x : vars)
      pol.labels[{p, x}] = elems[rng.below(elems.size())];
  return pol;
}

std::optional<std::string> brute_force_join(
    const std::vector<std::string>& elements,
    const std::vector<std::pair<std::string, std::string>>& edges, const std::string& a,
    const std::string& b) {
  auto closed_leq = [&](const std::string& from, const std::string& to) {
    // reachability over declared edges
    std::set<std::string> seen{from};
    std::vector<std::string> work{from};
    while (!work.empty()) {
      std::string cur = work.back();
      work.pop_back();
      if (cur == to) return true;
      for (const auto& [x, y] : edges)
        if (x == cur && seen.insert(y).second) work.push_back(y);
    }
    return from == to;
  };
  std::vector<std::string> uppers;
  for (const auto& u : elements)
    if (closed_leq(a, u) && closed_leq(b, u)) uppers.push_back(u);
  std::vector<std::string> minimal;
  for (const auto& u : uppers) {
    bool is_min = true;
    for (const auto& w : uppers)
      if (w != u && closed_leq(w, u)) is_min = false;
    if (is_min) minimal.push_back(u);
  }
  if (minimal.size() != 1) return std::nullopt;
  return minimal.front();
}

namespace {

std::string oracle_expr_level(const Policy& pol, const std::string& proc, const Expr& e) {
  if (std::holds_alternative<ConstExpr>(e.node)) return pol.lattice.bottom();
  if (const auto* v = std::get_if<VarExpr>(&e.node)) return pol.label_of(proc, v->name);
  std::string level = pol.lattice.bottom();
  for (const auto& arg : std::get<CallExpr>(e.node).args)
    level = pol.lattice.join(level, oracle_expr_level(pol, proc, arg));
  return level;
}

}  // namespace

bool straightline_accepts(const Policy& policy, const Program& prog) {
  const std::string pc = policy.lattice.bottom();
  for (const auto& instr : prog.main) {
    if (const auto* a = std::get_if<AssignInstr>(&instr.node)) {
      if (!policy.lattice.leq(
              policy.lattice.join(oracle_expr_level(policy, a->proc, a->expr), pc),
              policy.label_of(a->proc, a->var)))
        return false;
    } else if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
      if (!policy.lattice.leq(
              policy.lattice.join(oracle_expr_level(policy, c->sender, c->expr), pc),
              policy.label_of(c->receiver, c->var)))
        return false;
    }
  }
  return true;
}

bool replay_trace(const Program& prog, const CStore& initial, const FunEnv& fe,
                  const std::vector<TransitionLabel>& trace, const CStore& final_store) {
  std::vector<Configuration> frontier{initial_configuration(prog, initial)};
  for (const auto& label : trace) {
    std::vector<Configuration> next;
    for (const auto& cfg : frontier) {
      for (const auto& t : enabled(cfg, fe)) {
        if (!(t.label == label)) continue;
        bool dup = false;
        for (const auto& seen : next)
          if (chor_equal(seen.chor, t.next.chor) && seen.store == t.next.store) {
            dup = true;
            break;
          }
        if (!dup) next.push_back(t.next);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) return false;
  }
  for (const auto& cfg : frontier)
    if (cfg.chor.empty() && cfg.store == final_store) return true;
  return false;
}

Policy sample_member_env(const Lattice& lattice, const Program& prog,
                         const ConstraintSet& constraints, const std::string& pc,
                         SplitMix64& rng) {
  Policy pol = gen_policy(prog, lattice, rng);
  // Raise violated targets until the labelling satisfies every
  // constraint; strictly increasing in a finite poset, so it terminates.
  for (;;) {
    bool changed = false;
    for (const auto& c : constraints) {
      std::string level = eval_bound(c.bound, pol, pc);
      auto key = std::make_pair(c.target.proc, c.target.var);
      auto it = pol.labels.find(key);
      if (it == pol.labels.end()) {
        pol.labels[key] = level;
        changed = true;
        continue;
      }
      if (!lattice.leq(level, it->second)) {
        it->second = lattice.join(it->second, level);
        changed = true;
      }
    }
    if (!changed) return pol;
  }
}

}  // namespace chorsec::test
