#include "chorsec/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace chorsec {

namespace {

[[noreturn]] void fail(const std::string& message, int line = 0) {
  throw PolicyError(message, line);
}

}  // namespace

Lattice Lattice::make(std::vector<std::string> elements, const std::string& bottom,
                      const std::vector<std::pair<std::string, std::string>>& edges) {
  Lattice lat;
  if (elements.empty()) fail("lattice has no elements");
  lat.elements_ = std::move(elements);
  for (std::size_t i = 0; i < lat.elements_.size(); ++i) {
    auto [it, fresh] = lat.index_.emplace(lat.elements_[i], static_cast<int>(i));
    if (!fresh) fail("duplicate element '" + lat.elements_[i] + "'");
  }
  if (!lat.index_.count(bottom)) fail("bottom '" + bottom + "' is not a declared element");
  lat.bottom_ = bottom;

  const int n = static_cast<int>(lat.elements_.size());
  lat.leq_.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) lat.leq_[i][i] = true;
  for (const auto& [a, b] : edges) {
    auto ia = lat.index_.find(a);
    auto ib = lat.index_.find(b);
    if (ia == lat.index_.end()) fail("unknown label '" + a + "' in leq");
    if (ib == lat.index_.end()) fail("unknown label '" + b + "' in leq");
    lat.leq_[ia->second][ib->second] = true;
  }
  // reflexive-transitive closure
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (lat.leq_[i][k])
        for (int j = 0; j < n; ++j)
          if (lat.leq_[k][j]) lat.leq_[i][j] = true;

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (lat.leq_[i][j] && lat.leq_[j][i])
        fail("cycle between distinct elements '" + lat.elements_[i] + "' and '" +
             lat.elements_[j] + "'");

  const int bot = lat.index_.at(bottom);
  for (int i = 0; i < n; ++i)
    if (!lat.leq_[bot][i]) fail("bottom not below " + lat.elements_[i]);

  lat.join_.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> uppers;
      for (int u = 0; u < n; ++u)
        if (lat.leq_[i][u] && lat.leq_[j][u]) uppers.push_back(u);
      if (uppers.empty())
        fail("no upper bound for pair (" + lat.elements_[i] + ", " + lat.elements_[j] + ")");
      std::vector<int> minimal;
      for (int u : uppers) {
        bool is_min = true;
        for (int w : uppers)
          if (w != u && lat.leq_[w][u]) { is_min = false; break; }
        if (is_min) minimal.push_back(u);
      }
      if (minimal.size() != 1)
        fail("no unique least upper bound for pair (" + lat.elements_[i] + ", " +
             lat.elements_[j] + ")");
      lat.join_[i][j] = minimal.front();
    }
  }
  return lat;
}

bool Lattice::contains(const std::string& label) const { return index_.count(label) != 0; }

int Lattice::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw std::invalid_argument("unknown lattice element '" + label + "'");
  return it->second;
}

bool Lattice::leq(const std::string& a, const std::string& b) const {
  return leq_[index_of(a)][index_of(b)];
}

const std::string& Lattice::join(const std::string& a, const std::string& b) const {
  return elements_[join_[index_of(a)][index_of(b)]];
}

const std::string& Policy::label_of(const std::string& proc, const std::string& var) const {
  auto it = labels.find({proc, var});
  if (it != labels.end()) return it->second;
  if (default_label) return *default_label;
  throw PolicyError("no label for " + proc + "." + var + " and no default");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Policy parse_policy(std::string_view text) {
  std::vector<std::string> elements;
  std::optional<std::string> bottom;
  std::optional<std::string> low;
  std::optional<std::string> default_label;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::tuple<int, std::string, std::string, std::string>> label_lines;
  std::vector<ExternDecl> externs;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    auto want = [&](std::size_t n) {
      if (toks.size() != n)
        fail("'" + head + "' expects " + std::to_string(n - 1) + " argument(s)", lineno);
    };
    if (head == "element") {
      want(2);
      elements.push_back(toks[1]);
    } else if (head == "bottom") {
      want(2);
      if (bottom) fail("duplicate bottom", lineno);
      bottom = toks[1];
    } else if (head == "leq") {
      want(3);
      edges.emplace_back(toks[1], toks[2]);
    } else if (head == "low") {
      want(2);
      if (low) fail("duplicate low", lineno);
      low = toks[1];
    } else if (head == "label") {
      want(3);
      auto dot = toks[1].find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == toks[1].size())
        fail("label target must have form PROC.VAR", lineno);
      label_lines.emplace_back(lineno, toks[1].substr(0, dot), toks[1].substr(dot + 1), toks[2]);
    } else if (head == "default") {
      want(2);
      if (default_label) fail("duplicate default", lineno);
      default_label = toks[1];
    } else if (head == "extern") {
      want(4);
      ExternDecl decl;
      decl.name = toks[1];
      try {
        std::size_t pos = 0;
        decl.arity = std::stoi(toks[2], &pos);
        if (pos != toks[2].size() || decl.arity < 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        fail("extern arity must be a non-negative integer", lineno);
      }
      if (toks[3] == "bool") decl.result = ExternDecl::Result::Bool;
      else if (toks[3] == "int") decl.result = ExternDecl::Result::Int;
      else if (toks[3] == "string") decl.result = ExternDecl::Result::Str;
      else fail("extern result must be bool, int, or string", lineno);
      decl.span = Span{lineno, 1};
      for (const auto& prev : externs)
        if (prev.name == decl.name && !prev.same_signature(decl))
          fail("conflicting extern declaration for '" + decl.name + "'", lineno);
      externs.push_back(decl);
    } else {
      fail("unknown directive '" + head + "'", lineno);
    }
  }

  if (!bottom) fail("missing bottom");
  if (!low) fail("missing low");

  Policy pol;
  pol.lattice = Lattice::make(elements, *bottom, edges);
  if (!pol.lattice.contains(*low)) fail("unknown label '" + *low + "' in low");
  pol.low = *low;
  if (default_label) {
    if (!pol.lattice.contains(*default_label))
      fail("unknown label '" + *default_label + "' in default");
    pol.default_label = *default_label;
  }
  for (const auto& [line, proc, var, label] : label_lines) {
    if (!pol.lattice.contains(label))
      fail("unknown label '" + label + "' for " + proc + "." + var, line);
    auto [it, fresh] = pol.labels.emplace(std::make_pair(proc, var), label);
    (void)it;
    if (!fresh) fail("duplicate label for " + proc + "." + var, line);
  }
  pol.externs = std::move(externs);
  return pol;
}

bool low_equiv(const Policy& policy, const CStore& s1, const CStore& s2) {
  auto domain_of = [](const CStore& s) {
    std::vector<std::pair<std::string, std::string>> dom;
    for (const auto& [p, vars] : s)
      for (const auto& [x, v] : vars) {
        (void)v;
        dom.emplace_back(p, x);
      }
    return dom;
  };
  if (domain_of(s1) != domain_of(s2))
    throw PolicyError("low_equiv: stores cover different located variables");
  for (const auto& [p, vars] : s1) {
    const auto& other = s2.at(p);
    for (const auto& [x, v] : vars) {
      const std::string& label = policy.label_of(p, x);
      if (!policy.lattice.leq(label, policy.low)) continue;
      if (!(v == other.at(x))) return false;
    }
  }
  return true;
}

}  // namespace chorsec
