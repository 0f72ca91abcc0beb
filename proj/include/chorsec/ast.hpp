// Abstract syntax of recursive choreographies, plus the structural
// operations the semantics and the checker are built on: process-name
// sets, grafting (sequential composition), process renaming,
// program-level well-formedness, and the located-variable scan.
//
// A choreography is a flat instruction sequence; the empty sequence is
// the terminated choreography. Conditional branches are themselves whole
// choreographies, so grafting a continuation is plain sequence append.
#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chorsec/value.hpp"

namespace chorsec {

struct Expr;

struct ConstExpr {
  Value value;
};

struct VarExpr {
  std::string name;
};

struct CallExpr {
  std::string function;
  std::vector<Expr> args;
};

struct Expr {
  std::variant<ConstExpr, VarExpr, CallExpr> node;
  Span span;

  static Expr constant(Value v, Span s = {});
  static Expr var(std::string name, Span s = {});
  static Expr call(std::string fn, std::vector<Expr> args, Span s = {});
};

bool operator==(const Expr& a, const Expr& b);  // ignores spans

struct Instruction;
using Choreography = std::vector<Instruction>;

// p.e -> q.x
struct ComInstr {
  std::string sender;
  Expr expr;
  std::string receiver;
  std::string var;
};

// p -> q[L]
struct SelInstr {
  std::string sender;
  std::string receiver;
  std::string label;
};

// p.x := e
struct AssignInstr {
  std::string proc;
  std::string var;
  Expr expr;
};

// if p.e then C1 else C2
struct CondInstr {
  std::string proc;
  Expr guard;
  Choreography then_branch;
  Choreography else_branch;
};

// X(p...)
struct CallInstr {
  std::string name;
  std::vector<std::string> actuals;
};

// Runtime-only marker: process `waiting` has yet to enter call X(p...)
// whose continuation was `continuation`. Never produced by the parser.
struct RtCallInstr {
  std::string waiting;
  std::string name;
  std::vector<std::string> actuals;
  Choreography continuation;
};

struct Instruction {
  std::variant<ComInstr, SelInstr, AssignInstr, CondInstr, CallInstr, RtCallInstr> node;
  Span span;
};

bool operator==(const Instruction& a, const Instruction& b);  // ignores spans
bool chor_equal(const Choreography& a, const Choreography& b);

struct ProcDef {
  std::vector<std::string> formals;
  Choreography body;
  Span span;
};

struct Program {
  std::vector<ExternDecl> externs;
  std::map<std::string, ProcDef> procs;
  Choreography main;
};

bool operator==(const Program& a, const Program& b);  // ignores spans

// Process names syntactically occurring in an instruction. A conditional
// contributes its guard process and everything in both branches; a
// runtime call marker contributes only the waiting process.
std::set<std::string> pn_instr(const Instruction& instr);
std::set<std::string> pn_chor(const Choreography& chor);

// Sequential composition: appends the continuation after the sequence.
// Branches of conditionals are left untouched; their own terminal end
// marks the branch end and the cond rules re-graft on branch selection.
Choreography graft(Choreography chor, const Choreography& continuation);

// Capture-free simultaneous renaming of process names. The map must be
// injective and cover every process of the choreography.
Choreography rename_processes(const Choreography& chor,
                              const std::map<std::string, std::string>& renaming);

// Program well-formedness: bodies mention only their formal processes,
// calls target defined procedures with matching arity and pairwise
// distinct actuals, formals are pairwise distinct, communications and
// selections have distinct endpoints, no runtime markers appear, and
// extern declarations neither clash with builtins nor with each other.
std::vector<Diagnostic> validate_program(const Program& prog);

// Every located variable the program can read or write: a syntactic scan
// of main and of procedure bodies (under their formal process names),
// plus the instantiation closure of procedure calls reachable from main,
// so the set also covers variables written under actual process names at
// run time.
std::set<std::pair<std::string, std::string>> located_vars(const Program& prog);

}  // namespace chorsec
