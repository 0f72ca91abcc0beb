// Finite security lattices, flow policies, and low-equivalence of stores.
//
// A lattice here is a finite poset with a bottom element and a unique
// least upper bound for every pair; that is all the checker, the
// constraint solver, and the harness ever use. Construction validates
// the declared order and precomputes the closure and the join table, so
// lookups never fail on valid inputs.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chorsec/value.hpp"

namespace chorsec {

class Lattice {
 public:
  // Builds a lattice from declared elements and `leq` edges. The order
  // is the reflexive-transitive closure of the edges. Throws PolicyError
  // on: duplicate elements, unknown names, a cycle among distinct
  // elements, bottom not below some element, or a pair of elements
  // without a unique least upper bound.
  static Lattice make(std::vector<std::string> elements,
                      const std::string& bottom,
                      const std::vector<std::pair<std::string, std::string>>& edges);

  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& bottom() const { return bottom_; }
  bool contains(const std::string& label) const;

  bool leq(const std::string& a, const std::string& b) const;
  const std::string& join(const std::string& a, const std::string& b) const;

 private:
  int index_of(const std::string& label) const;  // throws on unknown element

  std::vector<std::string> elements_;
  std::string bottom_;
  std::map<std::string, int> index_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<int>> join_;
};

struct Policy {
  Lattice lattice;
  std::string low;
  // (process, variable) -> label
  std::map<std::pair<std::string, std::string>, std::string> labels;
  std::optional<std::string> default_label;
  // Extern declarations carried by the policy file; merged with the
  // program's own declarations when building a function environment.
  std::vector<ExternDecl> externs;

  // Declared label, else the default. A lookup with neither is a
  // policy gap and throws PolicyError.
  const std::string& label_of(const std::string& proc,
                              const std::string& var) const;
};

// Parses the line-oriented policy format:
//   element NAME · bottom NAME · leq NAME NAME · low NAME ·
//   label PROC.VAR NAME · default NAME · extern FNAME ARITY bool|int|string
// `#` starts a comment. Throws PolicyError with the offending line.
Policy parse_policy(std::string_view text);

// True iff the stores agree on every located variable whose label is
// below-or-equal the policy's observation level. The stores must cover
// the same located variables; a domain mismatch throws.
bool low_equiv(const Policy& policy, const CStore& s1, const CStore& s2);

}  // namespace chorsec
