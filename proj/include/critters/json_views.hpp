#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "critters/adequacy.hpp"
#include "critters/levels.hpp"
#include "critters/service.hpp"
#include "critters/trace_io.hpp"

// Structured documents served over HTTP and printed by the CLI.

namespace critters {

inline ojson tile_json(TileCoord t) { return ojson{{"x", t.x}, {"y", t.y}}; }

inline ojson to_json(const StarThresholds& t) {
  return ojson{{"one", t.one}, {"two", t.two}, {"three", t.three}};
}

inline ojson to_json(const ScoreResult& s) {
  return ojson{{"points", s.points},
               {"stars", s.stars},
               {"base_points", s.base_points},
               {"portal_penalty", s.portal_penalty}};
}

inline ojson level_summary_json(const LevelDefinition& level) {
  return ojson{{"id", level.id},
               {"name", level.name},
               {"tier", std::string(to_string(level.tier))},
               {"required_portals", level.required_portals},
               {"critters", level.critter_count()},
               {"healthy", level.healthy_count},
               {"mutants", level.mutant_count()},
               {"stars", to_json(level.thresholds())}};
}

/// Levels grouped by tier, tiers in curriculum order, levels in id order.
inline ojson levels_index_json(const std::vector<LevelDefinition>& levels) {
  ojson tiers = ojson::array();
  for (Tier tier : kTiers) {
    ojson entries = ojson::array();
    for (const auto& l : levels) {
      if (l.tier == tier) entries.push_back(level_summary_json(l));
    }
    tiers.push_back(ojson{{"tier", std::string(to_string(tier))}, {"levels", std::move(entries)}});
  }
  return ojson{{"tiers", std::move(tiers)}};
}

/// Everything a client needs to draw and play the level. Mutant programs are
/// withheld: only their ids and spawn counts are listed.
inline ojson level_document_json(const LevelDefinition& level) {
  ojson doc = level_summary_json(level);
  ojson grid = ojson::array();
  for (int y = 0; y < kBoardSize; ++y) grid.push_back(grid_row(level.board, y));
  doc["grid"] = std::move(grid);
  doc["village"] = tile_json(level.board.village);
  doc["tower"] = tile_json(level.board.tower);
  doc["cut"] = to_text(level.cut);
  ojson variants = ojson::array();
  for (const auto& m : level.mutants) {
    variants.push_back(ojson{{"id", m.mutant.id}, {"count", m.count}});
  }
  doc["mutant_variants"] = std::move(variants);
  return doc;
}

inline ojson to_json(const PortalPlacement& p) {
  return ojson{{"x", p.tile.x}, {"y", p.tile.y}, {"predicate", to_text(p.predicate)}};
}

/// Accepts {"x":..,"y":..,"predicate":"pass if ..."}.
inline PortalPlacement portal_from_json(const ojson& j) {
  if (!j.is_object()) throw Error("portal must be an object");
  if (!j.contains("x") || !j.contains("y") || !j.contains("predicate")) {
    throw Error("portal needs x, y and predicate");
  }
  if (!j["x"].is_number_integer() || !j["y"].is_number_integer() || !j["predicate"].is_string()) {
    throw Error("portal fields have the wrong type");
  }
  return PortalPlacement{{j["x"].get<int>(), j["y"].get<int>()},
                         parse_predicate(j["predicate"].get<std::string>())};
}

inline ojson to_json(const Session& s) {
  ojson portals = ojson::array();
  for (const auto& p : s.portals) portals.push_back(to_json(p));
  ojson runs = ojson::array();
  for (const auto& r : s.runs) {
    runs.push_back(ojson{{"seed", r.seed},
                         {"outcome", to_json(r.outcome)},
                         {"points", r.score.points},
                         {"stars", r.score.stars}});
  }
  return ojson{{"id", s.id},
               {"player", s.player},
               {"level", s.level_id},
               {"started_at", s.started_at},
               {"portals", std::move(portals)},
               {"runs", std::move(runs)}};
}

inline ojson to_json(const RunResponse& r) {
  return ojson{{"session", to_json(r.session)}, {"run", r.run},
               {"seed", r.seed},                {"outcome", to_json(r.outcome)},
               {"score", to_json(r.score)},     {"trace", to_json(r.trace)}};
}

inline ojson leaderboard_json(const std::vector<LeaderboardEntry>& entries) {
  ojson rows = ojson::array();
  int rank = 0;
  for (const auto& e : entries) {
    rows.push_back(ojson{{"rank", ++rank},
                         {"player", e.player},
                         {"total_points", e.total_points},
                         {"total_stars", e.total_stars}});
  }
  return ojson{{"entries", std::move(rows)}};
}

inline ojson to_json(const DiscriminationReport& r) {
  auto tiles = [](const std::vector<TileCoord>& ts) {
    ojson out = ojson::array();
    for (TileCoord t : ts) out.push_back(ojson::array({t.x, t.y}));
    return out;
  };
  ojson witness = ojson::array();
  for (TileCoord t : r.witness) {
    ojson w = tile_json(t);
    w["oracle"] = to_text(*r.oracle_at(t));
    witness.push_back(std::move(w));
  }
  ojson oracles = ojson::array();
  for (const auto& o : r.oracles) {
    ojson w = tile_json(o.tile);
    w["oracle"] = to_text(o.oracle);
    oracles.push_back(std::move(w));
  }
  ojson mutants = ojson::array();
  for (const auto& m : r.discriminating) {
    mutants.push_back(ojson{{"id", m.mutant},
                            {"discriminating_tiles", tiles(m.tiles)},
                            {"catchable_paths", m.paths},
                            {"evading_paths", m.evading_paths}});
  }
  return ojson{{"solvable", r.solvable()},
               {"minimal_count", r.minimal_count},
               {"exact", r.exact},
               {"path_count", r.path_count},
               {"witness", std::move(witness)},
               {"mutants", std::move(mutants)},
               {"equivalent", r.equivalent},
               {"undetectable", r.undetectable},
               {"oracles", std::move(oracles)}};
}

}  // namespace critters
