#pragma once

#include <algorithm>
#include <bitset>
#include <set>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "critters/error.hpp"
#include "critters/lang.hpp"
#include "critters/level.hpp"
#include "critters/mutation.hpp"
#include "critters/world.hpp"

namespace critters {

/// The strongest single-conjunction oracle for tile `t`: one equality per
/// attribute or variable on which every healthy state at `t` agrees.
inline Predicate oracle_predicate(const std::set<CritterState>& healthy_states) {
  Predicate pred;
  if (healthy_states.empty()) return pred;
  const CritterState& first = *healthy_states.begin();
  for (Attribute a : kAttributes) {
    const bool agreed = std::all_of(healthy_states.begin(), healthy_states.end(),
                                    [&](const CritterState& s) { return s.get(a) == first.get(a); });
    if (agreed) pred.conjuncts.emplace_back(AttrEquals{a, first.get(a)});
  }
  for (const auto& [name, value] : first.variables) {
    const bool agreed =
        std::all_of(healthy_states.begin(), healthy_states.end(), [&](const CritterState& s) {
          const auto it = s.variables.find(name);
          return it != s.variables.end() && it->second == value;
        });
    if (agreed) pred.conjuncts.emplace_back(VarCompare{name, RelOp::eq, value});
  }
  return pred;
}

inline Predicate oracle_predicate(const Board& board, const Program& cut, TileCoord t) {
  const StateSets states = reachable_states(board, cut);
  if (!states.reachable(t)) throw Error("tile unreachable: " + to_string(t));
  return oracle_predicate(states.at(t));
}

/// A tile discriminates a mutant when the CUT's oracle there passes every
/// healthy state yet fails every state the mutant can arrive with.
inline bool discriminates(const std::set<CritterState>& mutant_states, const Predicate& oracle) {
  if (mutant_states.empty()) return false;
  return std::none_of(mutant_states.begin(), mutant_states.end(),
                      [&](const CritterState& s) { return eval_predicate(oracle, s); });
}

inline bool discriminates(const Board& board, const Program& cut, const MutantProgram& m,
                          TileCoord t) {
  const DistanceField field = distance_field(board);
  const StateSets healthy = reachable_states(board, field, cut);
  if (!healthy.reachable(t)) throw Error("tile unreachable: " + to_string(t));
  return discriminates(reachable_states(board, field, m.program).at(t),
                       oracle_predicate(healthy.at(t)));
}

using TileSet = std::bitset<kTileCount>;

struct HittingSetResult {
  std::vector<std::size_t> chosen;  // tile indices, ascending
  bool exact = true;
};

namespace detail {

class HittingSetSolver {
 public:
  explicit HittingSetSolver(std::vector<TileSet> elements) : elements_(std::move(elements)) {}

  std::vector<std::size_t> greedy() const {
    std::vector<std::size_t> chosen;
    std::vector<bool> hit(elements_.size(), false);
    std::size_t open = elements_.size();
    while (open > 0) {
      std::size_t best = 0;
      std::size_t best_gain = 0;
      for (std::size_t t = 0; t < kTileCount; ++t) {
        std::size_t gain = 0;
        for (std::size_t e = 0; e < elements_.size(); ++e) gain += !hit[e] && elements_[e][t];
        if (gain > best_gain) {
          best_gain = gain;
          best = t;
        }
      }
      chosen.push_back(best);
      for (std::size_t e = 0; e < elements_.size(); ++e) {
        if (!hit[e] && elements_[e][best]) {
          hit[e] = true;
          --open;
        }
      }
    }
    return chosen;
  }

  std::vector<std::size_t> exact(std::vector<std::size_t> upper_bound) {
    best_ = std::move(upper_bound);
    std::vector<std::size_t> open(elements_.size());
    for (std::size_t e = 0; e < open.size(); ++e) open[e] = e;
    std::vector<std::size_t> chosen;
    search(open, chosen);
    return best_;
  }

 private:
  // Elements with pairwise disjoint tile sets each need their own tile.
  std::size_t lower_bound(const std::vector<std::size_t>& open) const {
    TileSet used;
    std::size_t n = 0;
    for (std::size_t e : open) {
      if ((elements_[e] & used).none()) {
        used |= elements_[e];
        ++n;
      }
    }
    return n;
  }

  void search(const std::vector<std::size_t>& open, std::vector<std::size_t>& chosen) {
    if (open.empty()) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    if (chosen.size() + lower_bound(open) >= best_.size()) return;

    // Branch on the open element with the fewest hitting tiles.
    const std::size_t pivot = *std::min_element(
        open.begin(), open.end(),
        [&](std::size_t a, std::size_t b) { return elements_[a].count() < elements_[b].count(); });
    std::vector<std::pair<std::size_t, std::size_t>> options;  // (gain, tile)
    for (std::size_t t = 0; t < kTileCount; ++t) {
      if (!elements_[pivot][t]) continue;
      std::size_t gain = 0;
      for (std::size_t e : open) gain += elements_[e][t];
      options.emplace_back(gain, t);
    }
    std::stable_sort(options.begin(), options.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [gain, t] : options) {
      std::vector<std::size_t> rest;
      for (std::size_t e : open) {
        if (!elements_[e][t]) rest.push_back(e);
      }
      chosen.push_back(t);
      search(rest, chosen);
      chosen.pop_back();
    }
  }

  std::vector<TileSet> elements_;
  std::vector<std::size_t> best_;
};

// Drops elements implied by another (a superset is hit whenever its subset
// is) and tiles dominated by another tile (keeping the lowest index of equals).
inline std::vector<TileSet> reduce(std::vector<TileSet> elements) {
  std::vector<TileSet> kept;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    bool implied = false;
    for (std::size_t j = 0; j < elements.size() && !implied; ++j) {
      if (i == j) continue;
      const bool subset = (elements[j] & ~elements[i]).none();
      implied = subset && (elements[j] != elements[i] || j < i);
    }
    if (!implied) kept.push_back(elements[i]);
  }
  TileSet live;
  for (const auto& e : kept) live |= e;
  std::vector<TileSet> column(kTileCount);  // column[t] bit e: element e contains t
  for (std::size_t t = 0; t < kTileCount; ++t) {
    for (std::size_t e = 0; e < kept.size() && e < kTileCount; ++e) column[t][e] = kept[e][t];
  }
  if (kept.size() > kTileCount) return kept;
  TileSet drop;
  for (std::size_t t = 0; t < kTileCount; ++t) {
    if (!live[t]) continue;
    for (std::size_t u = 0; u < kTileCount; ++u) {
      if (u == t || !live[u]) continue;
      const bool covered = (column[t] & ~column[u]).none();
      if (covered && (column[t] != column[u] || u < t)) {
        drop[t] = true;
        break;
      }
    }
  }
  for (auto& e : kept) e &= ~drop;
  return kept;
}

}  // namespace detail

inline constexpr std::size_t kExactCandidateLimit = 20;
inline constexpr std::size_t kExactElementLimit = 12;

/// Minimum set of tiles hitting every element (each element is the set of
/// tiles that would hit it). Implied elements and dominated tiles are removed
/// first; branch-and-bound then improves on a greedy upper bound. Only when
/// the reduced instance exceeds both 20 candidate tiles and 12 elements is the
/// greedy answer returned unproven. nullopt when some element is empty.
inline std::optional<HittingSetResult> min_hitting_set(const std::vector<TileSet>& elements) {
  HittingSetResult result;
  for (const auto& e : elements) {
    if (e.none()) return std::nullopt;
  }
  if (elements.empty()) return result;

  const std::vector<TileSet> reduced = detail::reduce(elements);
  TileSet candidates;
  for (const auto& e : reduced) candidates |= e;

  detail::HittingSetSolver solver(reduced);
  std::vector<std::size_t> picked = solver.greedy();
  result.exact = candidates.count() <= kExactCandidateLimit || reduced.size() <= kExactElementLimit;
  if (result.exact) picked = solver.exact(std::move(picked));
  std::sort(picked.begin(), picked.end());
  result.chosen = std::move(picked);
  return result;
}

struct TileOracle {
  TileCoord tile;
  Predicate oracle;
};

struct MutantDiscrimination {
  std::string mutant;
  std::vector<TileCoord> tiles;  // tiles where every arriving state fails the oracle
  int paths = 0;                 // descent paths on which some portal tile could catch it
  int evading_paths = 0;         // descent paths on which no tile could catch it
};

struct DiscriminationReport {
  std::vector<MutantDiscrimination> discriminating;  // non-equivalent mutants only
  std::vector<TileOracle> oracles;                   // every observable tile
  std::vector<std::string> equivalent;
  std::vector<std::string> undetectable;  // non-equivalent, escapes on some path
  int path_count = 0;
  int minimal_count = 0;
  std::vector<TileCoord> witness;
  bool exact = true;

  const Predicate* oracle_at(TileCoord t) const {
    for (const auto& o : oracles) {
      if (o.tile == t) return &o.oracle;
    }
    return nullptr;
  }
  bool solvable() const { return undetectable.empty(); }
};

/// Tiles on `path` (tower excluded) where the program's state along that
/// path fails the tile's oracle.
inline TileSet catching_tiles(const Board& board, const Program& program,
                              const std::vector<TileCoord>& path,
                              const std::array<const Predicate*, kTileCount>& oracle_at) {
  TileSet out;
  CritterState state = exec_init(program);
  for (TileCoord t : path) {
    state = exec_tile(program, std::move(state), board.context(t));
    const Predicate* oracle = oracle_at[index_of(t)];
    if (oracle != nullptr && !eval_predicate(*oracle, state)) out[index_of(t)] = true;
  }
  return out;
}

/// Full adequacy analysis; lists unsolvable mutants instead of throwing.
///
/// Portals carry the synthesized oracle of their tile, so no healthy critter
/// is ever collected. A mutant walking path p is caught by tile t iff t is on
/// p and the mutant's state there fails the oracle; the minimum portal set is
/// the minimum hitting set over all (mutant, path) pairs. On a single
/// corridor this is the per-mutant discriminating-tile hitting set.
inline DiscriminationReport analyze_level(const Board& board, const Program& cut,
                                          const std::vector<MutantProgram>& mutants) {
  DiscriminationReport report;
  const DistanceField field = distance_field(board);
  const StateSets healthy = reachable_states(board, field, cut);
  const std::vector<TileCoord> tiles = observable_tiles(board, field);
  const auto paths = enumerate_paths(board, field);
  report.path_count = static_cast<int>(paths.size());

  for (TileCoord t : tiles) report.oracles.push_back({t, oracle_predicate(healthy.at(t))});
  std::array<const Predicate*, kTileCount> oracle_at{};
  for (const auto& o : report.oracles) oracle_at[index_of(o.tile)] = &o.oracle;

  std::vector<TileSet> elements;
  for (const auto& mutant : mutants) {
    const StateSets states = reachable_states(board, field, mutant.program);
    if (equivalent_states(board, field, healthy, states)) {
      report.equivalent.push_back(mutant.id);
      continue;
    }
    MutantDiscrimination disc{mutant.id, {}, 0, 0};
    for (std::size_t i = 0; i < tiles.size(); ++i) {
      if (discriminates(states.at(tiles[i]), report.oracles[i].oracle)) disc.tiles.push_back(tiles[i]);
    }
    for (const auto& path : paths) {
      TileSet hits = catching_tiles(board, mutant.program, path, oracle_at);
      if (hits.none()) {
        ++disc.evading_paths;
      } else {
        ++disc.paths;
        elements.push_back(hits);
      }
    }
    if (disc.evading_paths > 0) report.undetectable.push_back(mutant.id);
    report.discriminating.push_back(std::move(disc));
  }

  if (report.solvable()) {
    const auto solution = min_hitting_set(elements);
    report.exact = solution->exact;
    report.minimal_count = static_cast<int>(solution->chosen.size());
    for (std::size_t i : solution->chosen) report.witness.push_back(coord_of(i));
  }
  return report;
}

inline std::vector<MutantProgram> mutant_programs(const LevelDefinition& level) {
  std::vector<MutantProgram> out;
  for (const auto& m : level.mutants) out.push_back(m.mutant);
  return out;
}

inline DiscriminationReport analyze_level(const LevelDefinition& level) {
  return analyze_level(level.board, level.cut, mutant_programs(level));
}

/// The level's minimal portal set. Throws when a mutant cannot be discriminated.
inline DiscriminationReport required_portals(const LevelDefinition& level) {
  DiscriminationReport report = analyze_level(level);
  if (!report.solvable()) {
    throw Error("unsolvable: mutant " + report.undetectable.front() +
                " has no discriminating tile on some path");
  }
  return report;
}

/// Witness tiles paired with their synthesized oracles.
template <class Portal>
std::vector<Portal> witness_portals(const DiscriminationReport& report) {
  std::vector<Portal> out;
  for (TileCoord t : report.witness) out.push_back(Portal{t, *report.oracle_at(t)});
  return out;
}

}  // namespace critters
