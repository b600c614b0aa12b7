#pragma once

#include <filesystem>
#include <string>

#include "critters/levels.hpp"

namespace fixtures {

using namespace critters;

inline constexpr const char* kDirtCut =
    "init { shirt = red } tile { if terrain == dirt { shirt = orange } }";
inline constexpr const char* kBlueMutant =
    "init { shirt = red } tile { if terrain == dirt { shirt = blue } }";

inline std::filesystem::path level_dir() { return CRITTERS_DEFAULT_LEVEL_DIR; }

inline const LevelDefinition& bundled(int number) {
  static const std::vector<LevelDefinition> all = load_level_directory(level_dir());
  return all.at(static_cast<std::size_t>(number - 1));
}

inline const std::vector<LevelDefinition>& all_bundled() {
  static const std::vector<LevelDefinition> all = load_level_directory(level_dir());
  return all;
}

/// Row `y` walkable from x=0 (village) to x=15 (tower), water elsewhere.
inline Board corridor(int y = 7, Terrain ground = Terrain::grass) {
  Board b;
  b.terrain.fill(Terrain::water);
  for (int x = 0; x < kBoardSize; ++x) b.set({x, y}, ground);
  b.village = {0, y};
  b.tower = {15, y};
  return b;
}

/// A 3-wide open strip: plenty of shortest paths that merge again.
inline Board strip(int y0 = 6) {
  Board b;
  b.terrain.fill(Terrain::water);
  for (int x = 0; x < kBoardSize; ++x) {
    for (int y = y0; y < y0 + 3; ++y) b.set({x, y}, Terrain::grass);
  }
  b.village = {0, y0};
  b.tower = {15, y0 + 2};
  return b;
}

/// Diamond: two shortest routes of equal length around a water tile.
inline Board diamond() {
  Board b;
  b.terrain.fill(Terrain::water);
  for (TileCoord t : {TileCoord{5, 5}, TileCoord{6, 5}, TileCoord{5, 6}, TileCoord{6, 6}}) {
    b.set(t, Terrain::grass);
  }
  b.village = {5, 5};
  b.tower = {6, 6};
  return b;
}

/// x=7..8, y=5..7 grass except a dirt tile at (8,5); village (7,5), tower
/// (8,7). Routes through (8,5) and (7,6) meet again at (8,6).
inline Board merge() {
  Board b;
  b.terrain.fill(Terrain::water);
  for (int x = 7; x <= 8; ++x) {
    for (int y = 5; y <= 7; ++y) b.set({x, y}, Terrain::grass);
  }
  b.set({8, 5}, Terrain::dirt);
  b.village = {7, 5};
  b.tower = {8, 7};
  return b;
}

inline MutantProgram mutant(std::string id, const Program& cut, const std::string& descriptor) {
  const MutationDescriptor d = parse_descriptor(descriptor);
  return MutantProgram{std::move(id), apply_mutation(cut, d), d};
}

/// Shirt turns orange from x=8 on; the mutant only from x=9 on.
inline LevelDefinition evasion_level() {
  LevelDefinition level;
  level.id = "evasion";
  level.name = "Evasion";
  level.board = corridor();
  level.cut = parse_program("init { shirt = red } tile { if x >= 8 { shirt = orange } }");
  level.mutants.push_back({mutant("late", level.cut, "threshold_replacement 1.0.0 9"), 10});
  level.healthy_count = 10;
  level.required_portals = 1;
  return level;
}

}  // namespace fixtures
