// Concrete syntax for choreography source files and a round-tripping
// pretty-printer.
//
//   program := extern* procdef* "main" "{" chor "}"
//   extern  := "extern" NAME INT ("bool"|"int"|"string")
//   procdef := "proc" NAME "(" NAME ("," NAME)* ")" "{" chor "}"
//   chor    := (instr (";" instr)*)? — empty block is the terminated
//              choreography; "skip" is sugar for it, valid only alone
//   instr   := NAME "." expr "->" NAME "." NAME
//            | NAME "->" NAME "[" NAME "]"
//            | NAME "." NAME ":=" expr
//            | "if" NAME "." expr "then" "{" chor "}" "else" "{" chor "}"
//            | NAME "(" NAME ("," NAME)* ")"
//   expr    := INT | STRING | "true" | "false" | NAME
//            | NAME "(" (expr ("," expr)*)? ")"
#pragma once

#include <string>
#include <string_view>

#include "chorsec/ast.hpp"

namespace chorsec {

// Throws ParseError (with a span inside the input) on lexical errors,
// unexpected tokens, or trailing input.
Program parse_program(std::string_view text);

// Emits concrete syntax such that parse_program(pretty_print(p)) is
// structurally equal to p. Throws std::invalid_argument if the program
// contains runtime call markers, which have no source form.
std::string pretty_print(const Program& prog);

std::string print_expr(const Expr& expr);

}  // namespace chorsec
