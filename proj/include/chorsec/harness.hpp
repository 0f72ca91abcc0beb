// Differential testing of termination-insensitive non-interference:
// generate pairs of low-equivalent stores, execute both under
// independently seeded random schedulers sharing one function seed, and
// compare the low projections of the final stores. Divergent or stuck
// runs are inconclusive, never failures.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "chorsec/infer.hpp"
#include "chorsec/runtime.hpp"

namespace chorsec {

struct Trial {
  std::size_t index = 0;
  std::uint64_t trial_seed = 0;
  std::uint64_t store_seed = 0;
  std::uint64_t sched_seed1 = 0;
  std::uint64_t sched_seed2 = 0;
  std::uint64_t fun_seed = 0;

  enum class Result { Pass, Violation, Inconclusive };
  Result result = Result::Pass;
  std::string reason;  // Inconclusive: which side and why

  CStore initial1, initial2;
  CStore final1, final2;
  std::vector<TransitionLabel> trace1, trace2;
};

struct NiReport {
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t inconclusive = 0;
  std::vector<Trial> violations;
  // A violation on a program the checker accepts falsifies the soundness
  // claim (or reveals an interpreter bug) and is flagged loudly.
  bool well_typed = false;
  bool hard_failure = false;
  double wall_ms = 0.0;
};

// Both stores assign every located variable of the program: variables
// observable at the policy's level get identical pseudorandom values,
// the rest draw independently. Value pool: ints 0..7, booleans, 4-char
// lowercase strings.
std::pair<CStore, CStore> gen_store_pair(const Program& prog, const Policy& policy,
                                         std::uint64_t seed);

// Runs `trials` independent trials. Per-trial seeds derive from the base
// seed and the trial index, so reports are reproducible bit for bit
// (modulo wall-clock) and every recorded witness replays.
NiReport nitest(const Program& prog, const Policy& policy, const DeltaContext& delta,
                std::size_t trials, std::uint64_t base_seed, std::size_t max_steps);

// Summary line plus one `VIOLATION trial=<i> seed=<s>` block per witness
// with both final store dumps and traces.
void render_report(const NiReport& report, std::ostream& out, bool include_wall = true);

}  // namespace chorsec
