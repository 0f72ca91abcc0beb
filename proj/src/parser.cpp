#include "chorsec/parser.hpp"

#include <cctype>
#include <sstream>

namespace chorsec {

namespace {

enum class Tok {
  Name, Int, Str,
  KwMain, KwProc, KwExtern, KwIf, KwThen, KwElse, KwSkip, KwTrue, KwFalse,
  KwBool, KwInt, KwString,
  Dot, Comma, Semi, Arrow, Assign, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  End,
};

struct Token {
  Tok kind;
  std::string text;   // identifier / literal payload
  std::int64_t ival = 0;
  Span span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Span here{line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", 0, here});
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(lex_name(here));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(lex_int(here, false));
      } else if (c == '"') {
        out.push_back(lex_string(here));
      } else if (c == '-') {
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          out.push_back({Tok::Arrow, "->", 0, here});
        } else if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          out.push_back(lex_int(here, true));
        } else {
          throw ParseError(here, "stray '-' (expected '->' or a negative integer)");
        }
      } else if (c == ':') {
        advance();
        if (pos_ < text_.size() && text_[pos_] == '=') {
          advance();
          out.push_back({Tok::Assign, ":=", 0, here});
        } else {
          throw ParseError(here, "stray ':' (expected ':=')");
        }
      } else {
        advance();
        switch (c) {
          case '.': out.push_back({Tok::Dot, ".", 0, here}); break;
          case ',': out.push_back({Tok::Comma, ",", 0, here}); break;
          case ';': out.push_back({Tok::Semi, ";", 0, here}); break;
          case '(': out.push_back({Tok::LParen, "(", 0, here}); break;
          case ')': out.push_back({Tok::RParen, ")", 0, here}); break;
          case '{': out.push_back({Tok::LBrace, "{", 0, here}); break;
          case '}': out.push_back({Tok::RBrace, "}", 0, here}); break;
          case '[': out.push_back({Tok::LBracket, "[", 0, here}); break;
          case ']': out.push_back({Tok::RBracket, "]", 0, here}); break;
          default:
            throw ParseError(here, std::string("unexpected character '") + c + "'");
        }
      }
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Token lex_name(Span here) {
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      name += text_[pos_];
      advance();
    }
    static const std::map<std::string, Tok> keywords = {
        {"main", Tok::KwMain}, {"proc", Tok::KwProc},   {"extern", Tok::KwExtern},
        {"if", Tok::KwIf},     {"then", Tok::KwThen},   {"else", Tok::KwElse},
        {"skip", Tok::KwSkip}, {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
        {"bool", Tok::KwBool}, {"int", Tok::KwInt},     {"string", Tok::KwString}};
    auto kw = keywords.find(name);
    if (kw != keywords.end()) return {kw->second, name, 0, here};
    return {Tok::Name, name, 0, here};
  }

  Token lex_int(Span here, bool negative) {
    std::uint64_t acc = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::uint64_t digit = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (acc > (0xFFFFFFFFFFFFFFFFull - digit) / 10)
        throw ParseError(here, "integer literal out of range");
      acc = acc * 10 + digit;
      any = true;
      advance();
    }
    if (!any) throw ParseError(here, "expected digits");
    std::uint64_t limit = negative ? 0x8000000000000000ull : 0x7FFFFFFFFFFFFFFFull;
    if (acc > limit) throw ParseError(here, "integer literal out of range");
    std::int64_t value =
        negative ? static_cast<std::int64_t>(~acc + 1) : static_cast<std::int64_t>(acc);
    return {Tok::Int, "", value, here};
  }

  Token lex_string(Span here) {
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n')
        throw ParseError(here, "unterminated string literal");
      char c = text_[pos_];
      advance();
      if (c == '"') return {Tok::Str, out, 0, here};
      if (c == '\\') {
        if (pos_ >= text_.size()) throw ParseError(here, "unterminated string literal");
        char esc = text_[pos_];
        advance();
        switch (esc) {
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default:
            throw ParseError(here, std::string("unknown escape '\\") + esc + "'");
        }
      } else {
        out += c;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Program run() {
    Program prog;
    while (at(Tok::KwExtern)) prog.externs.push_back(parse_extern());
    while (at(Tok::KwProc)) {
      Span here = peek().span;
      auto [name, def] = parse_procdef();
      if (!prog.procs.emplace(name, std::move(def)).second)
        throw ParseError(here, "duplicate procedure '" + name + "'");
    }
    expect(Tok::KwMain, "expected 'main'");
    expect(Tok::LBrace, "expected '{'");
    prog.main = parse_chor();
    expect(Tok::RBrace, "expected '}'");
    if (!at(Tok::End)) throw ParseError(peek().span, "trailing input after main block");
    return prog;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    if (i >= tokens_.size()) i = tokens_.size() - 1;
    return tokens_[i];
  }
  bool at(Tok kind, std::size_t k = 0) const { return peek(k).kind == kind; }
  Token take() { return tokens_[pos_ >= tokens_.size() ? tokens_.size() - 1 : pos_++]; }
  Token expect(Tok kind, const std::string& what) {
    if (!at(kind)) throw ParseError(peek().span, what + ", got '" + describe(peek()) + "'");
    return take();
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::Int: return std::to_string(t.ival);
      case Tok::Str: return quote_string(t.text);
      default: return t.text;
    }
  }

  std::string expect_name(const std::string& what) { return expect(Tok::Name, what).text; }

  ExternDecl parse_extern() {
    ExternDecl decl;
    decl.span = take().span;  // 'extern'
    decl.name = expect_name("expected extern function name");
    Token arity = expect(Tok::Int, "expected extern arity");
    if (arity.ival < 0) throw ParseError(arity.span, "extern arity must be non-negative");
    decl.arity = static_cast<int>(arity.ival);
    if (at(Tok::KwBool)) decl.result = ExternDecl::Result::Bool;
    else if (at(Tok::KwInt)) decl.result = ExternDecl::Result::Int;
    else if (at(Tok::KwString)) decl.result = ExternDecl::Result::Str;
    else throw ParseError(peek().span, "expected extern result type (bool, int, or string)");
    take();
    for (auto& i : externs_seen_)
      if (i == decl.name)
        throw ParseError(decl.span, "duplicate extern '" + decl.name + "'");
    externs_seen_.push_back(decl.name);
    return decl;
  }

  std::pair<std::string, ProcDef> parse_procdef() {
    ProcDef def;
    def.span = take().span;  // 'proc'
    std::string name = expect_name("expected procedure name");
    expect(Tok::LParen, "expected '('");
    def.formals.push_back(expect_name("expected formal process name"));
    while (at(Tok::Comma)) {
      take();
      def.formals.push_back(expect_name("expected formal process name"));
    }
    expect(Tok::RParen, "expected ')'");
    expect(Tok::LBrace, "expected '{'");
    def.body = parse_chor();
    expect(Tok::RBrace, "expected '}'");
    return {name, std::move(def)};
  }

  Choreography parse_chor() {
    Choreography chor;
    if (at(Tok::RBrace)) return chor;  // empty block
    if (at(Tok::KwSkip)) {
      Token skip = take();
      if (!at(Tok::RBrace))
        throw ParseError(skip.span, "'skip' is only valid alone in a block");
      return chor;
    }
    chor.push_back(parse_instr());
    while (at(Tok::Semi)) {
      take();
      if (at(Tok::KwSkip))
        throw ParseError(peek().span, "'skip' is only valid alone in a block");
      chor.push_back(parse_instr());
    }
    return chor;
  }

  Instruction parse_instr() {
    Span here = peek().span;
    if (at(Tok::KwIf)) {
      take();
      CondInstr cond;
      cond.proc = expect_name("expected process name after 'if'");
      expect(Tok::Dot, "expected '.'");
      cond.guard = parse_expr();
      expect(Tok::KwThen, "expected 'then'");
      expect(Tok::LBrace, "expected '{'");
      cond.then_branch = parse_chor();
      expect(Tok::RBrace, "expected '}'");
      expect(Tok::KwElse, "expected 'else'");
      expect(Tok::LBrace, "expected '{'");
      cond.else_branch = parse_chor();
      expect(Tok::RBrace, "expected '}'");
      return {std::move(cond), here};
    }
    std::string first = expect_name("expected instruction");
    if (at(Tok::LParen)) {  // procedure call
      take();
      CallInstr call;
      call.name = first;
      call.actuals.push_back(expect_name("expected actual process name"));
      while (at(Tok::Comma)) {
        take();
        call.actuals.push_back(expect_name("expected actual process name"));
      }
      expect(Tok::RParen, "expected ')'");
      return {std::move(call), here};
    }
    if (at(Tok::Arrow)) {  // selection
      take();
      SelInstr sel;
      sel.sender = first;
      sel.receiver = expect_name("expected receiver process name");
      expect(Tok::LBracket, "expected '['");
      sel.label = expect_name("expected selection label");
      expect(Tok::RBracket, "expected ']'");
      return {std::move(sel), here};
    }
    expect(Tok::Dot, "expected '.', '->', or '(' after process name");
    if (at(Tok::Name) && at(Tok::Assign, 1)) {  // assignment
      AssignInstr assign;
      assign.proc = first;
      assign.var = take().text;
      take();  // ':='
      assign.expr = parse_expr();
      return {std::move(assign), here};
    }
    ComInstr com;  // communication
    com.sender = first;
    com.expr = parse_expr();
    expect(Tok::Arrow, "expected '->'");
    com.receiver = expect_name("expected receiver process name");
    expect(Tok::Dot, "expected '.'");
    com.var = expect_name("expected receiver variable name");
    return {std::move(com), here};
  }

  Expr parse_expr() {
    Span here = peek().span;
    if (at(Tok::Int)) return Expr::constant(Value::of_int(take().ival), here);
    if (at(Tok::Str)) return Expr::constant(Value::of_str(take().text), here);
    if (at(Tok::KwTrue)) { take(); return Expr::constant(Value::of_bool(true), here); }
    if (at(Tok::KwFalse)) { take(); return Expr::constant(Value::of_bool(false), here); }
    std::string name = expect_name("expected expression");
    if (!at(Tok::LParen)) return Expr::var(std::move(name), here);
    take();
    std::vector<Expr> args;
    if (!at(Tok::RParen)) {
      args.push_back(parse_expr());
      while (at(Tok::Comma)) {
        take();
        args.push_back(parse_expr());
      }
    }
    expect(Tok::RParen, "expected ')'");
    return Expr::call(std::move(name), std::move(args), here);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> externs_seen_;
};

}  // namespace

Program parse_program(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

std::string print_expr(const Expr& expr) {
  if (const auto* c = std::get_if<ConstExpr>(&expr.node)) return c->value.to_text();
  if (const auto* v = std::get_if<VarExpr>(&expr.node)) return v->name;
  const auto& call = std::get<CallExpr>(expr.node);
  std::string out = call.function + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(call.args[i]);
  }
  out += ")";
  return out;
}

namespace {

void print_chor(const Choreography& chor, int depth, std::string& out);

void print_instr(const Instruction& instr, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (const auto* c = std::get_if<ComInstr>(&instr.node)) {
    out += pad + c->sender + "." + print_expr(c->expr) + " -> " + c->receiver + "." + c->var;
  } else if (const auto* s = std::get_if<SelInstr>(&instr.node)) {
    out += pad + s->sender + " -> " + s->receiver + "[" + s->label + "]";
  } else if (const auto* a = std::get_if<AssignInstr>(&instr.node)) {
    out += pad + a->proc + "." + a->var + " := " + print_expr(a->expr);
  } else if (const auto* k = std::get_if<CondInstr>(&instr.node)) {
    out += pad + "if " + k->proc + "." + print_expr(k->guard) + " then {\n";
    print_chor(k->then_branch, depth + 1, out);
    out += pad + "} else {\n";
    print_chor(k->else_branch, depth + 1, out);
    out += pad + "}";
  } else if (const auto* call = std::get_if<CallInstr>(&instr.node)) {
    out += pad + call->name + "(";
    for (std::size_t i = 0; i < call->actuals.size(); ++i) {
      if (i) out += ", ";
      out += call->actuals[i];
    }
    out += ")";
  } else {
    throw std::invalid_argument("runtime call marker has no source syntax");
  }
}

void print_chor(const Choreography& chor, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (chor.empty()) {
    out += pad + "skip\n";
    return;
  }
  for (std::size_t i = 0; i < chor.size(); ++i) {
    print_instr(chor[i], depth, out);
    if (i + 1 < chor.size()) out += ";";
    out += "\n";
  }
}

}  // namespace

std::string pretty_print(const Program& prog) {
  std::string out;
  for (const auto& decl : prog.externs)
    out += "extern " + decl.name + " " + std::to_string(decl.arity) + " " +
           extern_result_name(decl.result) + "\n";
  if (!prog.externs.empty()) out += "\n";
  for (const auto& [name, def] : prog.procs) {
    out += "proc " + name + "(";
    for (std::size_t i = 0; i < def.formals.size(); ++i) {
      if (i) out += ", ";
      out += def.formals[i];
    }
    out += ") {\n";
    print_chor(def.body, 1, out);
    out += "}\n\n";
  }
  out += "main {\n";
  print_chor(prog.main, 1, out);
  out += "}\n";
  return out;
}

}  // namespace chorsec
