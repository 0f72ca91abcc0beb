// Runtime values, per-process and choreographic stores, and extern
// function signatures.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "chorsec/diagnostics.hpp"

namespace chorsec {

// A value is an Int, Bool, or Str. Values are totally ordered (by kind,
// then by payload) so every value set has a canonical enumeration and a
// canonical printed form.
class Value {
 public:
  enum class Kind { Int = 0, Bool = 1, Str = 2 };

  Value() : rep_(std::int64_t{0}) {}

  static Value of_int(std::int64_t v) { return Value(Rep(v)); }
  static Value of_bool(bool v) { return Value(Rep(v)); }
  static Value of_str(std::string v) { return Value(Rep(std::move(v))); }

  Kind kind() const { return static_cast<Kind>(rep_.index()); }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_str() const { return kind() == Kind::Str; }

  std::int64_t as_int() const { return std::get<std::int64_t>(rep_); }
  bool as_bool() const { return std::get<bool>(rep_); }
  const std::string& as_str() const { return std::get<std::string>(rep_); }

  bool operator==(const Value& other) const { return rep_ == other.rep_; }
  std::strong_ordering operator<=>(const Value& other) const;

  // Canonical text: decimal integers, `true`/`false`, double-quoted
  // strings with \\ \" \n \t escapes. Matches the store-file and
  // expression literal syntax.
  std::string to_text() const;

 private:
  using Rep = std::variant<std::int64_t, bool, std::string>;
  explicit Value(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

std::string quote_string(const std::string& s);

using PStore = std::map<std::string, Value>;
using CStore = std::map<std::string, PStore>;

struct ExternDecl {
  enum class Result { Bool, Int, Str };
  std::string name;
  int arity = 0;
  Result result = Result::Bool;
  Span span;

  bool same_signature(const ExternDecl& other) const {
    return name == other.name && arity == other.arity && result == other.result;
  }
};

const char* extern_result_name(ExternDecl::Result r);

}  // namespace chorsec
