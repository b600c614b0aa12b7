#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "critters/error.hpp"
#include "critters/lang.hpp"
#include "critters/level.hpp"
#include "critters/world.hpp"

namespace critters {

/// A portal is a test: its tile is the input, its predicate the oracle.
struct PortalPlacement {
  TileCoord tile;
  Predicate predicate;
  bool operator==(const PortalPlacement&) const = default;
};

struct SimConfig {
  int total_critters = kCrittersPerLevel;
  int spawn_interval_ticks = 2;
  std::uint64_t seed = 0;
};

struct Outcome {
  int mutants_collected = 0;
  int mutants_escaped = 0;
  int healthy_finished = 0;
  int healthy_collected = 0;
  int portals_used = 0;
  bool operator==(const Outcome&) const = default;
};

namespace event {

struct Spawn {
  int tick;
  int critter;
  std::string mutant;  // empty for healthy critters
  TileCoord tile;
  CritterState state;  // after the village tile's code ran
  bool operator==(const Spawn&) const = default;
};

struct Move {
  int tick;
  int critter;
  TileCoord from;
  TileCoord to;
  CritterState state;  // after the destination tile's code ran
  bool operator==(const Move&) const = default;
};

struct PortalCheck {
  int tick;
  int critter;
  TileCoord tile;
  bool passed;
  bool operator==(const PortalCheck&) const = default;
};

struct Collected {
  int tick;
  int critter;
  TileCoord tile;
  bool operator==(const Collected&) const = default;
};

struct Finished {
  int tick;
  int critter;
  bool operator==(const Finished&) const = default;
};

struct End {
  int tick;
  Outcome outcome;
  bool operator==(const End&) const = default;
};

}  // namespace event

using TraceEvent = std::variant<event::Spawn, event::Move, event::PortalCheck, event::Collected,
                                event::Finished, event::End>;

inline int tick_of(const TraceEvent& e) {
  return std::visit([](const auto& v) { return v.tick; }, e);
}

struct Trace {
  std::vector<TraceEvent> events;
  bool operator==(const Trace&) const = default;
};

struct RunResult {
  Trace trace;
  Outcome outcome;
};

/// Throws Error on the first invalid portal: non-walkable or off-path tiles,
/// the tower tile, duplicates, or an invalid predicate.
inline void validate_portals(const Board& board, const DistanceField& field,
                             const std::vector<PortalPlacement>& portals) {
  const auto tiles = path_tiles(board, field);
  std::array<bool, kTileCount> on_path{};
  for (TileCoord t : tiles) on_path[index_of(t)] = true;
  std::array<bool, kTileCount> used{};
  for (const auto& p : portals) {
    if (!on_board(p.tile)) throw Error("portal off the board at " + to_string(p.tile));
    if (!board.walkable(p.tile)) throw Error("tile not walkable: " + to_string(p.tile));
    if (p.tile == board.tower) throw Error("portal on the tower tile");
    if (!on_path[index_of(p.tile)]) throw Error("portal off-path at " + to_string(p.tile));
    if (used[index_of(p.tile)]) throw Error("duplicate portal tile " + to_string(p.tile));
    used[index_of(p.tile)] = true;
    if (auto v = validate_predicate(p.predicate); !v.empty()) throw ValidationError(std::move(v));
  }
}

inline void validate_portals(const Board& board, const std::vector<PortalPlacement>& portals) {
  validate_portals(board, distance_field(board), portals);
}

/// Runs one level to completion. Per tick: spawn the next critter every
/// `spawn_interval_ticks`, then advance every earlier critter one tile. A
/// critter entering a tile runs its tile code first; a portal on that tile
/// then checks the resulting state and collects the critter on failure.
inline RunResult run(const LevelDefinition& level, const std::vector<PortalPlacement>& portals,
                     const SimConfig& config) {
  const Board& board = level.board;
  const DistanceField field = distance_field(board);
  if (!field.at(board.village)) throw Error("no walkable path village→tower");
  validate_portals(board, field, portals);
  if (config.total_critters != level.critter_count()) {
    throw Error("critter count mismatch: config " + std::to_string(config.total_critters) +
                ", level " + std::to_string(level.critter_count()));
  }
  if (config.spawn_interval_ticks < 1) throw Error("spawn interval must be positive");

  std::array<const PortalPlacement*, kTileCount> portal_at{};
  for (const auto& p : portals) portal_at[index_of(p.tile)] = &p;

  struct Critter {
    const Program* program = nullptr;
    const std::string* mutant = nullptr;  // nullptr when healthy
    std::vector<TileCoord> path;
    std::size_t step = 0;
    CritterState state;
    int spawn_tick = 0;
    bool live = false;
  };

  std::vector<Critter> critters;
  critters.reserve(static_cast<std::size_t>(level.critter_count()));
  auto add = [&](const Program* program, const std::string* mutant) {
    Critter c;
    c.program = program;
    c.mutant = mutant;
    critters.push_back(std::move(c));
  };
  for (int i = 0; i < level.healthy_count; ++i) add(&level.cut, nullptr);
  for (const auto& m : level.mutants) {
    for (int i = 0; i < m.count; ++i) add(&m.mutant.program, &m.mutant.id);
  }

  std::mt19937_64 rng(config.seed);
  for (std::size_t i = critters.size(); i > 1; --i) {
    std::swap(critters[i - 1], critters[pick_index(rng, i)]);
  }
  for (auto& c : critters) c.path = sample_path(board, field, rng);

  RunResult result;
  Outcome& outcome = result.outcome;
  outcome.portals_used = static_cast<int>(portals.size());
  auto& events = result.trace.events;

  // Clears `live` when the critter leaves play on this tile.
  auto enter = [&](Critter& c, int id, int tick, TileCoord tile) {
    if (const PortalPlacement* portal = portal_at[index_of(tile)]) {
      const bool passed = eval_predicate(portal->predicate, c.state);
      events.emplace_back(event::PortalCheck{tick, id, tile, passed});
      if (!passed) {
        events.emplace_back(event::Collected{tick, id, tile});
        (c.mutant != nullptr ? outcome.mutants_collected : outcome.healthy_collected) += 1;
        c.live = false;
        return;
      }
    }
    if (tile == board.tower) {
      events.emplace_back(event::Finished{tick, id});
      (c.mutant != nullptr ? outcome.mutants_escaped : outcome.healthy_finished) += 1;
      c.live = false;
    }
  };

  std::size_t spawned = 0;
  int live = 0;
  int tick = 0;
  for (;; ++tick) {
    if (spawned < critters.size() && tick % config.spawn_interval_ticks == 0) {
      const int id = static_cast<int>(spawned);
      Critter& c = critters[spawned++];
      c.spawn_tick = tick;
      c.live = true;
      c.state = exec_tile(*c.program, exec_init(*c.program), board.context(board.village));
      events.emplace_back(
          event::Spawn{tick, id, c.mutant != nullptr ? *c.mutant : "", board.village, c.state});
      enter(c, id, tick, board.village);
      live += c.live ? 1 : 0;
    }
    for (std::size_t i = 0; i < spawned; ++i) {
      Critter& c = critters[i];
      if (!c.live || c.spawn_tick == tick) continue;
      const TileCoord from = c.path[c.step];
      const TileCoord to = c.path[++c.step];
      c.state = exec_tile(*c.program, std::move(c.state), board.context(to));
      events.emplace_back(event::Move{tick, static_cast<int>(i), from, to, c.state});
      enter(c, static_cast<int>(i), tick, to);
      live -= c.live ? 0 : 1;
    }
    if (spawned == critters.size() && live == 0) break;
  }
  events.emplace_back(event::End{tick, outcome});
  return result;
}

/// Recomputes the outcome from spawn and terminal events and checks it
/// against the trailing End record. Throws Error("malformed trace: ...").
inline Outcome replay(const Trace& trace) {
  auto malformed = [](const std::string& why) { return Error("malformed trace: " + why); };
  if (trace.events.empty()) throw malformed("missing end event");
  const auto* end = std::get_if<event::End>(&trace.events.back());
  if (end == nullptr) throw malformed("last event is not end");

  struct Status {
    bool mutant = false;
    bool terminal = false;
  };
  std::map<int, Status> critters;
  Outcome outcome;
  outcome.portals_used = end->outcome.portals_used;
  int last_tick = 0;

  auto live = [&](int id) -> Status& {
    auto it = critters.find(id);
    if (it == critters.end()) throw malformed("event for unknown critter " + std::to_string(id));
    if (it->second.terminal) {
      throw malformed("event after terminal event for critter " + std::to_string(id));
    }
    return it->second;
  };

  for (std::size_t i = 0; i + 1 < trace.events.size(); ++i) {
    const TraceEvent& e = trace.events[i];
    if (tick_of(e) < last_tick) throw malformed("events out of tick order");
    last_tick = tick_of(e);
    if (const auto* s = std::get_if<event::Spawn>(&e)) {
      if (!critters.emplace(s->critter, Status{!s->mutant.empty(), false}).second) {
        throw malformed("critter " + std::to_string(s->critter) + " spawned twice");
      }
    } else if (const auto* m = std::get_if<event::Move>(&e)) {
      live(m->critter);
    } else if (const auto* p = std::get_if<event::PortalCheck>(&e)) {
      live(p->critter);
    } else if (const auto* c = std::get_if<event::Collected>(&e)) {
      Status& s = live(c->critter);
      s.terminal = true;
      (s.mutant ? outcome.mutants_collected : outcome.healthy_collected) += 1;
    } else if (const auto* f = std::get_if<event::Finished>(&e)) {
      Status& s = live(f->critter);
      s.terminal = true;
      (s.mutant ? outcome.mutants_escaped : outcome.healthy_finished) += 1;
    } else {
      throw malformed("end event before the last record");
    }
  }
  if (end->tick < last_tick) throw malformed("events out of tick order");
  for (const auto& [id, s] : critters) {
    if (!s.terminal) throw malformed("critter " + std::to_string(id) + " has no terminal event");
  }
  if (outcome != end->outcome) throw malformed("end outcome disagrees with events");
  return outcome;
}

}  // namespace critters
