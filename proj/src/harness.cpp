#include "chorsec/harness.hpp"

#include <chrono>
#include <ostream>

#include "chorsec/rng.hpp"
#include "chorsec/typecheck.hpp"

namespace chorsec {

namespace {

Value draw_value(SplitMix64& rng) {
  switch (rng.below(3)) {
    case 0:
      return Value::of_int(static_cast<std::int64_t>(rng.below(8)));
    case 1:
      return Value::of_bool((rng.next() & 1) != 0);
    default: {
      std::string s(4, 'a');
      for (auto& c : s) c = static_cast<char>('a' + rng.below(26));
      return Value::of_str(std::move(s));
    }
  }
}

}  // namespace

std::pair<CStore, CStore> gen_store_pair(const Program& prog, const Policy& policy,
                                         std::uint64_t seed) {
  CStore s1, s2;
  for (const auto& [proc, var] : located_vars(prog)) {
    const std::string& label = policy.label_of(proc, var);
    SplitMix64 rng(mix64(seed ^ fnv1a64(proc + "." + var)));
    Value first = draw_value(rng);
    Value second = policy.lattice.leq(label, policy.low) ? first : draw_value(rng);
    s1[proc][var] = std::move(first);
    s2[proc][var] = std::move(second);
  }
  return {std::move(s1), std::move(s2)};
}

NiReport nitest(const Program& prog, const Policy& policy, const DeltaContext& delta,
                std::size_t trials, std::uint64_t base_seed, std::size_t max_steps) {
  const auto started = std::chrono::steady_clock::now();
  NiReport report;
  report.trials = trials;
  report.well_typed = check_program(prog, policy, delta).accepted();

  for (std::size_t i = 0; i < trials; ++i) {
    Trial trial;
    trial.index = i;
    trial.trial_seed = splitmix64_at(base_seed, i);
    SplitMix64 seeds(trial.trial_seed);
    trial.store_seed = seeds.next();
    trial.sched_seed1 = seeds.next();
    trial.sched_seed2 = seeds.next();
    trial.fun_seed = seeds.next();

    auto [s1, s2] = gen_store_pair(prog, policy, trial.store_seed);
    trial.initial1 = s1;
    trial.initial2 = s2;
    FunEnv fe = make_fun_env(prog, &policy, trial.fun_seed);

    Scheduler sched1 = make_scheduler(SchedKind::Random, trial.sched_seed1);
    Scheduler sched2 = make_scheduler(SchedKind::Random, trial.sched_seed2);
    Outcome o1 = run(initial_configuration(prog, std::move(s1)), fe, sched1, max_steps);
    Outcome o2 = run(initial_configuration(prog, std::move(s2)), fe, sched2, max_steps);
    trial.trace1 = o1.trace;
    trial.trace2 = o2.trace;
    trial.final1 = o1.store;
    trial.final2 = o2.store;

    auto describe = [](const Outcome& o) {
      return o.kind == Outcome::Kind::Cutoff ? std::string("cutoff") : "stuck: " + o.diagnostic;
    };
    if (o1.kind != Outcome::Kind::Terminated || o2.kind != Outcome::Kind::Terminated) {
      trial.result = Trial::Result::Inconclusive;
      if (o1.kind != Outcome::Kind::Terminated) trial.reason = "side 1 " + describe(o1);
      if (o2.kind != Outcome::Kind::Terminated) {
        if (!trial.reason.empty()) trial.reason += "; ";
        trial.reason += "side 2 " + describe(o2);
      }
      ++report.inconclusive;
      continue;
    }
    if (low_equiv(policy, o1.store, o2.store)) {
      trial.result = Trial::Result::Pass;
      ++report.passes;
    } else {
      trial.result = Trial::Result::Violation;
      report.violations.push_back(std::move(trial));
    }
  }

  report.hard_failure = report.well_typed && !report.violations.empty();
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             started)
                       .count();
  return report;
}

void render_report(const NiReport& report, std::ostream& out, bool include_wall) {
  out << "trials=" << report.trials << " passes=" << report.passes
      << " violations=" << report.violations.size() << " inconclusive=" << report.inconclusive
      << "\n";
  if (report.hard_failure)
    out << "HARD-FAILURE: violation witnessed on a program the checker accepts\n";
  for (const auto& trial : report.violations) {
    out << "VIOLATION trial=" << trial.index << " seed=" << trial.trial_seed << "\n";
    out << "-- store 1 --\n";
    print_store(trial.final1, out);
    out << "-- store 2 --\n";
    print_store(trial.final2, out);
    out << "-- trace 1 --\n";
    for (const auto& label : trial.trace1) out << label.to_text() << "\n";
    out << "-- trace 2 --\n";
    for (const auto& label : trial.trace2) out << label.to_text() << "\n";
  }
  if (include_wall) out << "wall_ms=" << report.wall_ms << "\n";
}

}  // namespace chorsec
