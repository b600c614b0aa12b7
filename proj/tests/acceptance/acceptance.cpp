// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "brute_force.hpp"
#include "critters/adequacy.hpp"
#include "critters/analytics.hpp"
#include "critters/cli.hpp"
#include "critters/portals.hpp"
#include "critters/scoring.hpp"
#include "critters/simulation.hpp"
#include "critters/synthetic.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "reference.hpp"

using namespace critters;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

SimConfig seeded(std::uint64_t seed, const LevelDefinition& level) {
  SimConfig c;
  c.seed = seed;
  c.total_critters = level.critter_count();
  return c;
}

ScoreResult play(const LevelDefinition& level, const std::vector<PortalPlacement>& portals,
                 std::uint64_t seed) {
  const Outcome o = run(level, portals, seeded(seed, level)).outcome;
  return compute_score(o, level.required_portals, level.thresholds());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Each check returns an empty string on success, otherwise what went wrong.
using Check = std::function<std::string()>;

std::string level1_witness_scores_full_marks() {
  const auto& level = fixtures::bundled(1);
  const auto portals = witness_portals<PortalPlacement>(required_portals(level));
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ScoreResult s = play(level, portals, seed);
    if (s.points != 1000 || s.stars != 3) {
      return "seed " + std::to_string(seed) + " scored " + std::to_string(s.points);
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed > 5) return "took " + std::to_string(elapsed) + " s";
  return "";
}

std::string redundant_portal_costs_25() {
  const auto& level = fixtures::bundled(1);
  auto portals = witness_portals<PortalPlacement>(required_portals(level));
  portals.push_back(parse_portals("5,8: pass always").front());
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ScoreResult s = play(level, portals, seed);
    if (s.points != 975) return "seed " + std::to_string(seed) + " scored " + std::to_string(s.points);
  }
  return "";
}

std::string minimal_portals_match_brute_force() {
  const auto t0 = Clock::now();
  for (int n = 1; n <= 10; ++n) {
    const auto& level = fixtures::bundled(n);
    const DiscriminationReport report = required_portals(level);
    const auto expected = brute::min_portals(level, 6);
    if (!expected) return level.id + ": brute force found no answer";
    if (!report.exact || report.minimal_count != expected->minimal) {
      return level.id + ": solver " + std::to_string(report.minimal_count) + ", brute force " +
             std::to_string(expected->minimal);
    }
    if (report.minimal_count != level.required_portals) return level.id + ": level file disagrees";
  }
  if (required_portals(fixtures::bundled(1)).minimal_count != 2) return "level01 is not 2";
  const double elapsed = seconds_since(t0);
  if (elapsed > 60) return "took " + std::to_string(elapsed) + " s";
  return "";
}

std::string evading_mutant_needs_the_right_tile() {
  const LevelDefinition level = fixtures::evasion_level();
  const auto late = parse_portals("9,7: pass if shirt == orange");
  const auto early = parse_portals("8,7: pass if shirt == orange");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Outcome a = run(level, late, seeded(seed, level)).outcome;
    if (a.mutants_collected != 0) return "portal at 9,7 caught a mutant";
    const Outcome b = run(level, early, seeded(seed, level)).outcome;
    if (b.mutants_collected != level.mutant_count() || b.healthy_collected != 0) {
      return "portal at 8,7 missed a mutant";
    }
  }
  return "";
}

std::string runs_are_reproducible() {
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / ("acceptance-a-" + std::to_string(rd()));
  const auto b = dir / ("acceptance-b-" + std::to_string(rd()));
  const std::string level = fixtures::level_dir().string() + "/level01.lvl";
  const std::string portals = fixtures::level_dir().string() + "/level01.portals";
  std::ostringstream out;
  std::ostringstream err;
  const int ca = run_cli({"play", level, "--portals", portals, "--seed", "7", "--trace", a.string()}, out, err);
  const int cb = run_cli({"play", level, "--portals", portals, "--seed", "7", "--trace", b.string()}, out, err);
  const std::string ta = slurp(a);
  const std::string tb = slurp(b);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  if (ca != 0 || cb != 0) return "play failed: " + err.str();
  if (ta.empty() || ta != tb) return "traces differ";

  for (int n = 1; n <= 10; ++n) {
    const auto& lvl = fixtures::bundled(n);
    const auto witness = witness_portals<PortalPlacement>(required_portals(lvl));
    const Outcome first = run(lvl, witness, seeded(0, lvl)).outcome;
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
      if (run(lvl, witness, seeded(seed, lvl)).outcome != first) return lvl.id + ": outcome depends on seed";
    }
  }
  return "";
}

std::string interpreter_matches_reference() {
  gen::Rng rng(2024);
  gen::ProgramGen g(rng);
  for (int i = 0; i < 1000; ++i) {
    const Program p = g.program();
    CritterState s = exec_init(p);
    ref::State r = ref::start(p);
    if (!ref::same(r, s)) return "init differs for " + to_text(p);
    for (const TileContext& t : gen::random_walk(rng, 6)) {
      s = exec_tile(p, s, t);
      r = ref::step(p, r, ref::tile_of(t));
      if (!ref::same(r, s)) return "tile code differs for " + to_text(p);
    }
  }
  return "";
}

std::string simulated_states_are_reachable() {
  gen::Rng rng(77);
  gen::ProgramGen g(rng);
  int pairs = 0;
  while (pairs < 200) {
    const LevelDefinition level = gen::random_level(rng, g);
    ++pairs;
    std::map<std::string, StateSets> sets;
    sets[""] = reachable_states(level.board, level.cut);
    for (const auto& m : mutant_programs(level)) sets[m.id] = reachable_states(level.board, m.program);
    const RunResult r = run(level, {}, seeded(rng.engine()(), level));
    std::map<int, std::string> kind;
    for (const auto& e : r.trace.events) {
      if (const auto* s = std::get_if<event::Spawn>(&e)) {
        kind[s->critter] = s->mutant;
        if (!sets.at(s->mutant).at(s->tile).count(s->state)) return "unreachable spawn state";
      }
      if (const auto* m = std::get_if<event::Move>(&e)) {
        if (!sets.at(kind.at(m->critter)).at(m->to).count(m->state)) {
          return "unreachable state at " + to_string(m->to);
        }
      }
    }
  }
  return "";
}

std::string mann_whitney_is_exact() {
  const auto r = mann_whitney_exact({1, 2}, {3, 4});
  if (r.p_numerator != 1 || r.p_denominator != 3) return "[1,2] vs [3,4] is not 1/3";
  gen::Rng rng(9);
  for (int n = 1; n < 10; ++n) {
    for (int m = 1; n + m <= 10; ++m) {
      for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> a(n);
        std::vector<double> b(m);
        const int spread = rep < 3 ? 3 : 40;
        for (auto& x : a) x = rng.between(0, spread);
        for (auto& x : b) x = rng.between(0, spread);
        const auto got = mann_whitney_exact(a, b);
        const auto want = brute::mann_whitney_p(a, b);
        if (!got.exact || got.p_numerator != want.num || got.p_denominator != want.den) {
          return "n=" + std::to_string(n) + " m=" + std::to_string(m) + ": " +
                 std::to_string(got.p_numerator) + "/" + std::to_string(got.p_denominator) + " vs " +
                 std::to_string(want.num) + "/" + std::to_string(want.den);
        }
      }
    }
  }
  return "";
}

std::string experienced_players_reach_further_levels() {
  const SyntheticLog log = generate_synthetic_log(fixtures::all_bundled());
  const TimeSeries g1 = time_series(log.events, 60'000, {}, 1);
  const TimeSeries g3 = time_series(log.events, 60'000, {}, 3);
  int compared = 0;
  for (int minute = 40; minute < 60; ++minute) {
    const auto bin = static_cast<std::size_t>(minute);
    if (bin >= g1.bins.size() || bin >= g3.bins.size()) break;
    const auto& a = g1.bins[bin].level;
    const auto& c = g3.bins[bin].level;
    if (!a || !c) continue;
    ++compared;
    if (c->low <= a->high) {
      return "minute " + std::to_string(minute) + ": group 3 low " + std::to_string(c->low) +
             " <= group 1 high " + std::to_string(a->high);
    }
  }
  if (compared == 0) return "no comparable bins";
  return "";
}

}  // namespace

int main() {
  const std::pair<const char*, Check> checks[] = {
      {"level01 witness portals score 1000 and 3 stars on 100 seeds", level1_witness_scores_full_marks},
      {"one redundant portal scores exactly 975", redundant_portal_costs_25},
      {"minimal portal counts match brute force on all levels", minimal_portals_match_brute_force},
      {"evading mutant is caught only before it diverges", evading_mutant_needs_the_right_tile},
      {"seeded runs are byte-for-byte reproducible", runs_are_reproducible},
      {"interpreter matches the reference on 1000 random programs", interpreter_matches_reference},
      {"simulated states lie within reachable states", simulated_states_are_reachable},
      {"Mann-Whitney p values are exact", mann_whitney_is_exact},
      {"group 3 is ahead of group 1 late in the session", experienced_players_reach_further_levels},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    std::string problem;
    try {
      problem = check();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    if (problem.empty()) {
      std::cout << "PASS " << name << "\n";
    } else {
      std::cout << "FAIL " << name << ": " << problem << "\n";
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
