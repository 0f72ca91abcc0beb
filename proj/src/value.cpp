#include "chorsec/value.hpp"

#include <sstream>

namespace chorsec {

std::strong_ordering Value::operator<=>(const Value& other) const {
  if (auto c = rep_.index() <=> other.rep_.index(); c != 0) return c;
  switch (kind()) {
    case Kind::Int:
      return as_int() <=> other.as_int();
    case Kind::Bool:
      return as_bool() <=> other.as_bool();
    case Kind::Str:
      return as_str().compare(other.as_str()) <=> 0;
  }
  return std::strong_ordering::equal;
}

std::string quote_string(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string Value::to_text() const {
  switch (kind()) {
    case Kind::Int:
      return std::to_string(as_int());
    case Kind::Bool:
      return as_bool() ? "true" : "false";
    case Kind::Str:
      return quote_string(as_str());
  }
  return {};
}

const char* extern_result_name(ExternDecl::Result r) {
  switch (r) {
    case ExternDecl::Result::Bool: return "bool";
    case ExternDecl::Result::Int: return "int";
    case ExternDecl::Result::Str: return "string";
  }
  return "?";
}

}  // namespace chorsec
