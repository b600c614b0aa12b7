#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "critters/error.hpp"
#include "critters/lang.hpp"

namespace critters {

inline constexpr int kTileCount = kBoardSize * kBoardSize;

struct TileCoord {
  int x = 0;
  int y = 0;
  auto operator<=>(const TileCoord&) const = default;
};

inline constexpr bool on_board(TileCoord t) {
  return t.x >= 0 && t.y >= 0 && t.x < kBoardSize && t.y < kBoardSize;
}
inline constexpr std::size_t index_of(TileCoord t) {
  return static_cast<std::size_t>(t.y * kBoardSize + t.x);
}
inline constexpr TileCoord coord_of(std::size_t index) {
  return {static_cast<int>(index) % kBoardSize, static_cast<int>(index) / kBoardSize};
}

inline std::string to_string(TileCoord t) {
  return "(" + std::to_string(t.x) + "," + std::to_string(t.y) + ")";
}

/// 16x16 terrain grid; row y, column x.
struct Board {
  std::array<Terrain, kTileCount> terrain{};
  TileCoord village;
  TileCoord tower;

  Terrain at(TileCoord t) const { return terrain[index_of(t)]; }
  void set(TileCoord t, Terrain kind) { terrain[index_of(t)] = kind; }
  bool walkable(TileCoord t) const { return on_board(t) && is_walkable(at(t)); }
  TileContext context(TileCoord t) const { return TileContext{t.x, t.y, at(t)}; }

  bool operator==(const Board&) const = default;
};

/// Walkable 4-neighbours in fixed N, W, E, S order (ascending tile index).
inline std::vector<TileCoord> walkable_neighbors(const Board& board, TileCoord t) {
  std::vector<TileCoord> out;
  for (TileCoord n : {TileCoord{t.x, t.y - 1}, TileCoord{t.x - 1, t.y}, TileCoord{t.x + 1, t.y},
                      TileCoord{t.x, t.y + 1}}) {
    if (board.walkable(n)) out.push_back(n);
  }
  return out;
}

/// Shortest walkable 4-connected distance to the tower; empty where the tower
/// cannot be reached.
struct DistanceField {
  std::array<std::optional<int>, kTileCount> distance{};

  std::optional<int> at(TileCoord t) const {
    return on_board(t) ? distance[index_of(t)] : std::nullopt;
  }
};

inline DistanceField distance_field(const Board& board) {
  DistanceField field;
  if (!board.walkable(board.tower)) return field;
  std::deque<TileCoord> queue{board.tower};
  field.distance[index_of(board.tower)] = 0;
  while (!queue.empty()) {
    const TileCoord t = queue.front();
    queue.pop_front();
    const int d = *field.distance[index_of(t)];
    for (TileCoord n : walkable_neighbors(board, t)) {
      auto& slot = field.distance[index_of(n)];
      if (!slot) {
        slot = d + 1;
        queue.push_back(n);
      }
    }
  }
  return field;
}

inline std::vector<std::string> validate_board(const Board& board) {
  std::vector<std::string> violations;
  if (!on_board(board.village)) violations.push_back("village off the board");
  if (!on_board(board.tower)) violations.push_back("tower off the board");
  if (!violations.empty()) return violations;
  if (board.village == board.tower) violations.push_back("village and tower on the same tile");
  if (!board.walkable(board.village)) violations.push_back("village on non-walkable terrain");
  if (!board.walkable(board.tower)) violations.push_back("tower on non-walkable terrain");
  if (violations.empty() && !distance_field(board).at(board.village)) {
    violations.push_back("no walkable path village→tower");
  }
  return violations;
}

/// Moves that strictly decrease the distance to the tower.
inline std::vector<TileCoord> descent_neighbors(const Board& board, const DistanceField& field,
                                                TileCoord t) {
  std::vector<TileCoord> out;
  const auto d = field.at(t);
  if (!d || *d == 0) return out;
  for (TileCoord n : walkable_neighbors(board, t)) {
    if (field.at(n) == *d - 1) out.push_back(n);
  }
  return out;
}

/// Every tile lying on some descent path from the village, in descending
/// distance order (a topological order of the descent DAG).
inline std::vector<TileCoord> path_tiles(const Board& board, const DistanceField& field) {
  std::vector<TileCoord> out;
  if (!field.at(board.village)) return out;
  std::array<bool, kTileCount> seen{};
  std::vector<TileCoord> layer{board.village};
  seen[index_of(board.village)] = true;
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end(),
              [](TileCoord a, TileCoord b) { return index_of(a) < index_of(b); });
    out.insert(out.end(), layer.begin(), layer.end());
    std::vector<TileCoord> next;
    for (TileCoord t : layer) {
      for (TileCoord n : descent_neighbors(board, field, t)) {
        if (!seen[index_of(n)]) {
          seen[index_of(n)] = true;
          next.push_back(n);
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

/// Uniform index in [0, n) from a 64-bit engine; the modulo bias is below 2^-60
/// for the tiny n used here and keeps draws identical across standard libraries.
template <class Rng>
std::size_t pick_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

/// A uniformly random shortest route from village to tower.
template <class Rng>
std::vector<TileCoord> sample_path(const Board& board, const DistanceField& field, Rng& rng) {
  std::vector<TileCoord> path{board.village};
  if (!field.at(board.village)) return {};
  while (path.back() != board.tower) {
    const auto options = descent_neighbors(board, field, path.back());
    path.push_back(options[pick_index(rng, options.size())]);
  }
  return path;
}

template <class Rng>
std::vector<TileCoord> sample_path(const Board& board, Rng& rng) {
  return sample_path(board, distance_field(board), rng);
}

/// Every descent path from village to tower, in lexicographic tile-index
/// order. Throws once more than `limit` paths exist.
inline std::vector<std::vector<TileCoord>> enumerate_paths(const Board& board,
                                                           const DistanceField& field,
                                                           std::size_t limit = 20000) {
  std::vector<std::vector<TileCoord>> out;
  if (!field.at(board.village)) return out;
  std::vector<TileCoord> current{board.village};
  auto walk = [&](auto&& self) -> void {
    if (current.back() == board.tower) {
      if (out.size() == limit) {
        throw Error("more than " + std::to_string(limit) + " descent paths");
      }
      out.push_back(current);
      return;
    }
    for (TileCoord n : descent_neighbors(board, field, current.back())) {
      current.push_back(n);
      self(self);
      current.pop_back();
    }
  };
  walk(walk);
  return out;
}

/// Per-tile set of critter states a program can exhibit after running its tile
/// code there, over every descent path. Off-path tiles hold empty sets.
struct StateSets {
  std::vector<std::set<CritterState>> per_tile = std::vector<std::set<CritterState>>(kTileCount);

  const std::set<CritterState>& at(TileCoord t) const { return per_tile[index_of(t)]; }
  bool reachable(TileCoord t) const { return on_board(t) && !at(t).empty(); }
  bool operator==(const StateSets&) const = default;
};

inline StateSets reachable_states(const Board& board, const DistanceField& field,
                                  const Program& program) {
  StateSets sets;
  if (!field.at(board.village)) return sets;
  sets.per_tile[index_of(board.village)].insert(
      exec_tile(program, exec_init(program), board.context(board.village)));
  // Descending distance is a topological order, so one pass reaches the fixpoint.
  for (TileCoord t : path_tiles(board, field)) {
    const auto& here = sets.per_tile[index_of(t)];
    for (TileCoord n : descent_neighbors(board, field, t)) {
      auto& there = sets.per_tile[index_of(n)];
      const TileContext ctx = board.context(n);
      for (const auto& state : here) there.insert(exec_tile(program, state, ctx));
    }
  }
  return sets;
}

inline StateSets reachable_states(const Board& board, const Program& program) {
  return reachable_states(board, distance_field(board), program);
}

}  // namespace critters
