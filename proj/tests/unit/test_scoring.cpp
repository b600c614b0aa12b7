#include <gtest/gtest.h>

#include "critters/scoring.hpp"
#include "critters/simulation.hpp"

using namespace critters;

namespace {

Outcome outcome(int killed, int escaped, int finished, int collected, int portals) {
  return Outcome{killed, escaped, finished, collected, portals};
}

}  // namespace

TEST(Score, PerfectTwoPortalRun) {
  const ScoreResult s = compute_score(outcome(10, 0, 10, 0, 2), 2);
  EXPECT_EQ(s.points, 1000);
  EXPECT_EQ(s.stars, 3);
  EXPECT_EQ(s.base_points, 1000);
  EXPECT_EQ(s.portal_penalty, 0);
}

TEST(Score, OneRedundantPortal) {
  // 1000 - 25 * (3 - 2)
  const ScoreResult s = compute_score(outcome(10, 0, 10, 0, 3), 2);
  EXPECT_EQ(s.points, 975);
  EXPECT_EQ(s.portal_penalty, 25);
  EXPECT_EQ(s.stars, 3);
}

TEST(Score, NothingRight) {
  const ScoreResult s = compute_score(outcome(0, 10, 0, 10, 0), 2);
  EXPECT_EQ(s.points, 0);
  EXPECT_EQ(s.stars, 0);
}

TEST(Score, NeverNegative) {
  const ScoreResult s = compute_score(outcome(0, 10, 1, 9, 20), 0);
  EXPECT_EQ(s.base_points, 50);
  EXPECT_EQ(s.portal_penalty, 500);
  EXPECT_EQ(s.points, 0);
}

TEST(Score, FewerPortalsThanRequiredAreNotPenalised) {
  EXPECT_EQ(compute_score(outcome(4, 6, 10, 0, 1), 2).portal_penalty, 0);
}

TEST(Stars, Thresholds) {
  EXPECT_EQ(stars(1000), 3);
  EXPECT_EQ(stars(950), 3);
  EXPECT_EQ(stars(949), 2);
  EXPECT_EQ(stars(800), 2);
  EXPECT_EQ(stars(799), 1);
  EXPECT_EQ(stars(500), 1);
  EXPECT_EQ(stars(499), 0);
  EXPECT_EQ(stars(0), 0);
}

TEST(Stars, Override) {
  const StarThresholds t{300, 600, 900};
  EXPECT_EQ(stars(300, t), 1);
  EXPECT_EQ(stars(899, t), 2);
  EXPECT_EQ(compute_score(outcome(9, 1, 9, 1, 2), 2, t).stars, 3);
}

TEST(ScoreProperty, BoundsAndLaws) {
  // every split of 10 mutants and 10 healthy, 0..6 portals, 0..4 required
  for (int killed = 0; killed <= 10; ++killed) {
    for (int finished = 0; finished <= 10; ++finished) {
      for (int portals = 0; portals <= 6; ++portals) {
        for (int required = 0; required <= 4; ++required) {
          const Outcome o = outcome(killed, 10 - killed, finished, 10 - finished, portals);
          const ScoreResult s = compute_score(o, required);
          ASSERT_GE(s.points, 0);
          ASSERT_LE(s.points, 1000);
          ASSERT_EQ(s.points == 1000, killed == 10 && finished == 10 && portals <= required);
          ASSERT_EQ(s.stars, stars(s.points));
          if (killed < 10) {
            ASSERT_GE(compute_score(outcome(killed + 1, 9 - killed, finished, 10 - finished, portals), required).points,
                      s.points);
          }
          ASSERT_LE(compute_score(outcome(killed, 10 - killed, finished, 10 - finished, portals + 1), required).points,
                    s.points);
          if (s.points > 0) {
            ASSERT_EQ(s.points, 50 * (killed + finished) - 25 * std::max(0, portals - required));
          }
        }
      }
    }
  }
}

TEST(ScoreProperty, StarsMonotone) {
  for (int p = 0; p < 1000; ++p) ASSERT_LE(stars(p), stars(p + 1));
}
