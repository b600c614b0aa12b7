#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "critters/adequacy.hpp"
#include "critters/service.hpp"

namespace critters {

// Behaviour profiles of the synthetic study population. Each player has a
// number of levels they will complete; once there they keep failing the next
// level (or replaying the last one) until the session ends.
enum class Profile : std::uint8_t { disengaged, completionist, rusher };

inline constexpr std::string_view to_string(Profile p) {
  constexpr std::array<std::string_view, 3> names{"disengaged", "completionist", "rusher"};
  return names[static_cast<std::size_t>(p)];
}

struct SyntheticConfig {
  std::uint64_t seed = 2024;
  int disengaged = 6;
  int completionist = 20;
  int rusher = 14;
  std::int64_t start_ms = 1'700'000'000'000;
  std::int64_t duration_ms = 60 * 60'000;
};

struct SyntheticPlayer {
  std::string name;
  Profile profile = Profile::disengaged;
  int target = 0;  // levels this player completes
};

struct SyntheticLog {
  std::vector<SyntheticPlayer> players;
  std::vector<TelemetryEvent> events;
};

namespace detail {

struct ProfileParams {
  int min_target;
  int max_target;
  double min_minutes;  // per attempt
  double max_minutes;
  double success;  // probability an attempt uses a complete portal set
};

inline constexpr ProfileParams params_for(Profile p) {
  switch (p) {
    case Profile::disengaged:
      return {1, 3, 4.0, 8.0, 0.6};
    case Profile::completionist:
      return {4, 7, 2.5, 5.0, 0.7};
    case Profile::rusher:
      break;
  }
  return {8, 10, 1.5, 3.5, 0.85};
}

}  // namespace detail

/// Plays `levels` (curriculum order) with the configured population through a
/// real SessionStore driven by a fake clock, returning its telemetry log.
/// Deterministic for a given seed.
inline SyntheticLog generate_synthetic_log(const std::vector<LevelDefinition>& levels,
                                           const SyntheticConfig& config = {}) {
  if (levels.empty()) throw Error("no levels");
  std::mt19937_64 rng(config.seed);
  std::int64_t now = config.start_ms;
  StoreOptions options;
  options.clock = [&now] { return now; };
  options.seed_source = [&rng] { return rng() >> 11; };
  SessionStore store(levels, options);

  std::vector<std::vector<PortalPlacement>> perfect;
  for (const auto& level : levels) {
    perfect.push_back(witness_portals<PortalPlacement>(required_portals(level)));
  }

  struct State {
    SyntheticPlayer player;
    std::size_t level = 0;
    int completed = 0;
    std::string session;
  };
  std::vector<State> states;
  auto add_players = [&](Profile profile, int count) {
    const auto p = detail::params_for(profile);
    for (int i = 0; i < count; ++i) {
      State s;
      s.player.profile = profile;
      s.player.target = std::uniform_int_distribution<int>(p.min_target, p.max_target)(rng);
      s.player.target = std::min<int>(s.player.target, static_cast<int>(levels.size()));
      states.push_back(std::move(s));
    }
  };
  add_players(Profile::disengaged, config.disengaged);
  add_players(Profile::completionist, config.completionist);
  add_players(Profile::rusher, config.rusher);
  std::shuffle(states.begin(), states.end(), rng);
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].player.name = "player" + std::string(i < 9 ? "0" : "") + std::to_string(i + 1);
  }

  // Each attempt is three timed steps so the log stays in clock order:
  // start (open a session if needed), place portals, run.
  enum class Step : std::uint8_t { start, place, run };
  using Wakeup = std::tuple<std::int64_t, std::size_t, Step>;
  std::priority_queue<Wakeup, std::vector<Wakeup>, std::greater<>> queue;
  for (std::size_t i = 0; i < states.size(); ++i) {
    queue.emplace(config.start_ms + static_cast<std::int64_t>(rng() % 180'000), i, Step::start);
  }
  const std::int64_t end_ms = config.start_ms + config.duration_ms;
  std::vector<std::vector<PortalPlacement>> pending(states.size());

  while (!queue.empty()) {
    const auto [t, i, step] = queue.top();
    queue.pop();
    State& s = states[i];
    now = t;
    const auto p = detail::params_for(s.player.profile);
    const int missing = s.player.target - s.completed;

    if (step == Step::start) {
      if (s.session.empty()) {
        s.session = store.create_session(s.player.name, levels[s.level].id).id;
      }
      const auto minutes = std::uniform_real_distribution<double>(p.min_minutes, p.max_minutes)(rng);
      const auto duration = static_cast<std::int64_t>(minutes * 60'000);
      if (t + duration > end_ms) continue;

      // A player who could no longer reach their target in time plays it safe.
      const bool rushed = missing > 0 && (end_ms - t) <= missing * p.max_minutes * 60'000 * 1.5;
      bool success = rushed || std::bernoulli_distribution(p.success)(rng);
      // Past the target only replays of an already completed level succeed.
      if (missing <= 0 && s.completed <= static_cast<int>(s.level)) success = false;

      std::vector<PortalPlacement>& portals = pending[i];
      portals.clear();
      if (success) {
        portals = perfect[s.level];
        if (std::bernoulli_distribution(0.2)(rng)) {
          // One redundant pass-always portal on a free path tile.
          const auto& board = levels[s.level].board;
          for (TileCoord tile : path_tiles(board, distance_field(board))) {
            const bool used = std::any_of(portals.begin(), portals.end(),
                                          [&](const PortalPlacement& q) { return q.tile == tile; });
            if (!used && tile != board.tower) {
              portals.push_back({tile, Predicate{}});
              break;
            }
          }
        }
      } else if (std::bernoulli_distribution(0.5)(rng)) {
        portals.push_back({perfect[s.level].front().tile, Predicate{}});
      }
      queue.emplace(t + duration - 20'000, i, Step::place);
    } else if (step == Step::place) {
      store.set_portals(s.session, pending[i]);
      queue.emplace(t + 20'000, i, Step::run);
    } else {
      const RunResponse result = store.run_session(s.session);
      if (result.score.stars >= 1 && missing > 0) {
        ++s.completed;
        if (s.level + 1 < levels.size()) {
          ++s.level;
          s.session.clear();
        }
      }
      queue.emplace(t + 5'000, i, Step::start);
    }
  }

  SyntheticLog log;
  for (const auto& s : states) log.players.push_back(s.player);
  log.events = store.events();
  return log;
}

}  // namespace critters
