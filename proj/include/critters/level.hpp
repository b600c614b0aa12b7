#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critters/lang.hpp"
#include "critters/mutation.hpp"
#include "critters/scoring.hpp"
#include "critters/world.hpp"

namespace critters {

enum class Tier : std::uint8_t { tutorial, beginner, advanced };

inline constexpr std::array kTiers{Tier::tutorial, Tier::beginner, Tier::advanced};

inline constexpr std::string_view to_string(Tier t) {
  constexpr std::array<std::string_view, 3> names{"tutorial", "beginner", "advanced"};
  return names[static_cast<std::size_t>(t)];
}

inline constexpr int kCrittersPerLevel = 20;

struct MutantSpawn {
  MutantProgram mutant;
  int count = 0;
  bool operator==(const MutantSpawn&) const = default;
};

struct LevelDefinition {
  std::string id;
  std::string name;
  Tier tier = Tier::tutorial;
  Board board;
  Program cut;
  std::vector<MutantSpawn> mutants;
  int healthy_count = 0;
  int required_portals = 0;
  std::optional<StarThresholds> star_thresholds;

  int mutant_count() const {
    int n = 0;
    for (const auto& m : mutants) n += m.count;
    return n;
  }
  int critter_count() const { return healthy_count + mutant_count(); }
  StarThresholds thresholds() const { return star_thresholds.value_or(StarThresholds{}); }

  const MutantProgram* find_mutant(std::string_view mutant_id) const {
    for (const auto& m : mutants) {
      if (m.mutant.id == mutant_id) return &m.mutant;
    }
    return nullptr;
  }

  bool operator==(const LevelDefinition&) const = default;
};

}  // namespace critters
