#include <doctest.h>

#include "chorsec/typecheck.hpp"
#include "support.hpp"

using namespace chorsec;
using namespace chorsec::test;

namespace {

Policy recovery_policy() { return parse_policy(read_fixture("recovery.policy")); }

std::vector<FlowError> check_main(const Program& prog, const Policy& pol) {
  LfpResult inferred = lfp(prog);
  return check_chor(pol, prog, inferred.delta, pol.lattice.bottom(), prog.main);
}

}  // namespace

TEST_CASE("expression levels") {
  Policy pol = recovery_policy();
  CHECK(type_expr(pol, "s", Expr::constant(Value::of_int(5))) == "Low");
  CHECK(type_expr(pol, "s", Expr::var("email")) == "High");
  CHECK(type_expr(pol, "s", Expr::call("exists", {Expr::var("email")})) == "High");
  CHECK(type_expr(pol, "r", Expr::call("f", {})) == "Low");  // empty join is bottom
  CHECK_THROWS_AS(type_expr(pol, "s", Expr::var("unlabelled")), PolicyError);
}

TEST_CASE("the insecure recovery choreography is rejected at the response") {
  Program prog = parse_valid(read_fixture("recovery_insecure.chor"));
  Policy pol = recovery_policy();
  auto errors = check_main(prog, pol);
  REQUIRE(errors.size() == 2);  // both branches answer the requester
  for (const auto& e : errors) {
    CHECK(e.rule == "t-com");
    CHECK(e.computed == "High");
    CHECK(e.target_label == "Low");
    CHECK(e.proc == "r");
    CHECK(e.var == "msg");
    CHECK(e.pc == "High");
    CHECK(e.expr_label == "Low");  // the literal message is public; the context is not
  }
  CHECK(errors[0].render("f.chor") ==
        "error f.chor:6:5 t-com: High \xE2\x8B\xA2 Low writing r.msg");
}

TEST_CASE("the secure recovery choreography is accepted") {
  Program prog = parse_valid(read_fixture("recovery_secure.chor"));
  Policy pol = recovery_policy();
  CHECK(check_main(prog, pol).empty());
  LfpResult inferred = lfp(prog);
  CHECK(check_program(prog, pol, inferred.delta).accepted());
}

TEST_CASE("implicit flow guard: constant write under a high pc") {
  Policy pol = recovery_policy();
  Program prog = parse_valid("main { if s.email then { r.msg := 5 } else { skip } }");
  auto errors = check_main(prog, pol);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].rule == "t-local");
  CHECK(errors[0].computed == "High");
}

TEST_CASE("calls are checked through the constraint context") {
  //  X writes a constant into q.z, so called at pc=High it needs q.z high
  Program prog = parse_valid(
      "proc X(p, q) { q.z := 1 } main { if s.email then { X(a, b) } else { skip } }");
  Policy pol = recovery_policy();
  pol.labels[{"b", "z"}] = "Low";
  LfpResult inferred = lfp(prog);
  auto errors = check_chor(pol, prog, inferred.delta, "Low", prog.main);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].rule == "t-proc");
  CHECK(errors[0].proc == "b");
  CHECK(errors[0].var == "z");
  CHECK(errors[0].computed == "High");
  CHECK(errors[0].target_label == "Low");

  pol.labels[{"b", "z"}] = "High";
  CHECK(check_chor(pol, prog, inferred.delta, "Low", prog.main).empty());
}

TEST_CASE("runtime markers are untypeable") {
  Policy pol = recovery_policy();
  Program prog;
  prog.main = {{RtCallInstr{"r", "X", {"r"}, {}}, {}}};
  auto errors = check_chor(pol, prog, {}, "Low", prog.main);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].rule == "t-proc");
}

TEST_CASE("verify_delta accepts exactly the pre-fixed points") {
  Program prog = parse_valid(read_fixture("recursive.chor"));
  LfpResult inferred = lfp(prog);
  CHECK(verify_delta(prog, inferred.delta));

  DeltaContext empty;
  empty["X"] = {};
  CHECK_FALSE(verify_delta(prog, empty));

  Program flat = parse_valid("proc Y(p) { p.x := 1 } main { Y(a) }");
  DeltaContext once = phi(flat, DeltaContext{{"Y", {}}});
  CHECK(verify_delta(flat, once));
}

TEST_CASE("check_program flags an inconsistent context") {
  Program prog = parse_valid(read_fixture("recursive.chor"));
  Policy pol = recovery_policy();
  pol.default_label = "Low";
  DeltaContext empty{{"X", {}}};
  CheckReport report = check_program(prog, pol, empty);
  CHECK_FALSE(report.delta_consistent);
  CHECK_FALSE(report.accepted());
}

TEST_CASE("only conditionals change the pc") {
  SplitMix64 rng(99);
  for (int i = 0; i < 80; ++i) {
    Program prog = gen_program(rng);
    Policy pol = gen_policy(prog, diamond(), rng);
    LfpResult inferred = lfp(prog);
    std::vector<std::tuple<bool, std::string, std::string>> events;
    PcHook hook = [&](const Instruction& instr, const std::string& pc_in,
                      const std::string& pc_inner) {
      events.emplace_back(std::holds_alternative<CondInstr>(instr.node), pc_in, pc_inner);
    };
    for (const auto& pc : pol.lattice.elements()) {
      events.clear();
      (void)check_chor(pol, prog, inferred.delta, pc, prog.main, hook);
      for (const auto& [is_cond, pc_in, pc_inner] : events) {
        CHECK(is_cond);  // nothing else descends with a different pc
        CHECK(pol.lattice.leq(pc_in, pc_inner));
      }
    }
  }
}

TEST_CASE("acceptance is invariant under renaming of formals") {
  SplitMix64 rng(4242);
  int with_procs = 0;
  for (int i = 0; i < 120 && with_procs < 40; ++i) {
    Program prog = gen_program(rng);
    if (prog.procs.empty()) continue;
    ++with_procs;
    Policy pol = gen_policy(prog, two_point(), rng);

    // alpha-rename every procedure's formals to fresh names
    Program renamed = prog;
    for (auto& [name, def] : renamed.procs) {
      (void)name;
      std::map<std::string, std::string> subst;
      std::vector<std::string> fresh;
      for (std::size_t k = 0; k < def.formals.size(); ++k) {
        std::string nu = "u" + std::to_string(k);
        subst[def.formals[k]] = nu;
        fresh.push_back(nu);
      }
      def.body = rename_processes(def.body, subst);
      def.formals = fresh;
    }
    REQUIRE(validate_program(renamed).empty());
    // the fresh formals carry the labels of the names they replaced
    Policy pol2 = pol;
    for (auto& [name, def] : prog.procs) {
      const auto& fresh = renamed.procs.at(name).formals;
      for (std::size_t k = 0; k < def.formals.size(); ++k)
        for (const auto& [key, label] : pol.labels)
          if (key.first == def.formals[k]) pol2.labels[{fresh[k], key.second}] = label;
    }

    LfpResult a = lfp(prog);
    LfpResult b = lfp(renamed);
    bool accept_a = check_program(prog, pol, a.delta).accepted();
    bool accept_b = check_program(renamed, pol2, b.delta).accepted();
    CAPTURE(pretty_print(prog));
    CHECK(accept_a == accept_b);
  }
  CHECK(with_procs >= 20);
}

TEST_CASE("straight-line acceptance matches the brute-force oracle") {
  SplitMix64 rng(808);
  int straight = 0;
  for (int i = 0; i < 400 && straight < 120; ++i) {
    Program prog = gen_program(rng);
    if (!prog.procs.empty()) continue;
    bool flat = true;
    for (const auto& instr : prog.main)
      if (std::holds_alternative<CondInstr>(instr.node)) flat = false;
    if (!flat) continue;
    ++straight;
    for (const auto& named : test_lattices()) {
      Policy pol = gen_policy(prog, named.lattice, rng);
      bool accepted = check_main(prog, pol).empty();
      CAPTURE(named.name);
      CAPTURE(pretty_print(prog));
      CHECK(accepted == straightline_accepts(pol, prog));
    }
  }
  CHECK(straight >= 60);
}
