#pragma once

#include <algorithm>

namespace critters {

inline constexpr int kPointsPerCritter = 50;
inline constexpr int kPortalPenalty = 25;

/// Minimum points for one, two and three stars.
struct StarThresholds {
  int one = 500;
  int two = 800;
  int three = 950;
  bool operator==(const StarThresholds&) const = default;
};

struct ScoreResult {
  int points = 0;
  int stars = 0;
  int base_points = 0;
  int portal_penalty = 0;
  bool operator==(const ScoreResult&) const = default;
};

inline int stars(int points, const StarThresholds& t = {}) {
  if (points >= t.three) return 3;
  if (points >= t.two) return 2;
  if (points >= t.one) return 1;
  return 0;
}

/// Every healthy critter that finishes and every mutant that is collected
/// earns 50 points; each portal beyond the required count costs 25.
template <class OutcomeT>
ScoreResult compute_score(const OutcomeT& outcome, int required_portals,
                          const StarThresholds& thresholds = {}) {
  ScoreResult r;
  r.base_points = kPointsPerCritter * (outcome.mutants_collected + outcome.healthy_finished);
  r.portal_penalty = kPortalPenalty * std::max(0, outcome.portals_used - required_portals);
  r.points = std::max(0, r.base_points - r.portal_penalty);
  r.stars = stars(r.points, thresholds);
  return r;
}

}  // namespace critters
