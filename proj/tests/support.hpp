// Shared test machinery: fixture loading, a deterministic random program
// generator, policy generators over a family of small lattices, and the
// independent oracles the test suites check the implementation against.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chorsec/harness.hpp"
#include "chorsec/infer.hpp"
#include "chorsec/parser.hpp"
#include "chorsec/rng.hpp"
#include "chorsec/runtime.hpp"
#include "chorsec/typecheck.hpp"

namespace chorsec::test {

std::string read_fixture(const std::string& name);  // from TESTDATA_DIR
std::string fixture_path(const std::string& name);

// Parses and asserts validity; throws on diagnostics.
Program parse_valid(const std::string& source);

// Named small lattices (all <= 6 elements): two-point chain, three
// chain, diamond, M3, N5, and a six-element stack.
struct NamedLattice {
  std::string name;
  Lattice lattice;
};
const std::vector<NamedLattice>& test_lattices();

const Lattice& two_point();
const Lattice& diamond();

// Deterministic random programs: at most 3 procedures, at most 12
// instructions, recursion allowed, always passing validate_program.
Program gen_program(SplitMix64& rng);

// Labels the full (process name x variable name) grid of the program
// with random lattice elements and picks a random observation level, so
// every store the harness builds and every constraint the solver emits
// is labelled.
Policy gen_policy(const Program& prog, const Lattice& lattice, SplitMix64& rng);

// --- independent oracles -------------------------------------------------

// Least upper bound computed from declared edges by brute force:
// reflexive-transitive closure, upper-bound enumeration, minimality
// scan. Returns nullopt if no unique least upper bound exists.
std::optional<std::string> brute_force_join(
    const std::vector<std::string>& elements,
    const std::vector<std::pair<std::string, std::string>>& edges, const std::string& a,
    const std::string& b);

// Acceptance oracle for call-free, conditional-free programs: every
// assignment and communication must satisfy join(expression level, pc)
// below-or-equal the target label, with levels recomputed directly.
bool straightline_accepts(const Policy& policy, const Program& prog);

// Derivability of the big-step relation for a given trace: replays the
// label sequence through `enabled` tracking every reachable
// configuration, and checks some final configuration is terminated with
// exactly `final_store`.
bool replay_trace(const Program& prog, const CStore& initial, const FunEnv& fe,
                  const std::vector<TransitionLabel>& trace, const CStore& final_store);

// Draws a labelling satisfying the constraint set at the given pc:
// random start, then targets are raised until every constraint holds.
Policy sample_member_env(const Lattice& lattice, const Program& prog,
                         const ConstraintSet& constraints, const std::string& pc,
                         SplitMix64& rng);

}  // namespace chorsec::test
