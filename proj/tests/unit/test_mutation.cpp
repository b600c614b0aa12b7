#include <gtest/gtest.h>

#include <set>

#include "critters/mutation.hpp"
#include "critters/simulation.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace critters;

namespace {

bool contains(const std::vector<MutantProgram>& ms, const Program& p) {
  return std::any_of(ms.begin(), ms.end(), [&](const MutantProgram& m) { return m.program == p; });
}

}  // namespace

TEST(EnumerateMutants, DirtProgramIncludesBlueMutant) {
  const auto ms = enumerate_mutants(parse_program(fixtures::kDirtCut));
  EXPECT_TRUE(contains(ms, parse_program(fixtures::kBlueMutant)));
}

TEST(EnumerateMutants, SingleInitAssignmentGivesSevenColors) {
  // Hand count: one statement `shirt = red`; the seven other colors, and
  // deleting it is behaviourally the white replacement so it is not listed.
  const auto ms = enumerate_mutants(parse_program("init { shirt = red } tile { }"));
  ASSERT_EQ(ms.size(), 7U);
  std::set<Color> seen;
  for (const auto& m : ms) {
    ASSERT_EQ(m.program.init.size(), 1U);
    const auto& a = std::get<SetAttribute>(m.program.init[0].node);
    EXPECT_EQ(a.attr, Attribute::shirt);
    seen.insert(a.value);
  }
  EXPECT_EQ(seen.size(), 7U);
  EXPECT_EQ(seen.count(Color::red), 0U);
}

TEST(EnumerateMutants, ThresholdAndOperatorMutants) {
  const Program cut = parse_program("init { } tile { if x >= 8 { shirt = orange } }");
  const auto ms = enumerate_mutants(cut);
  EXPECT_TRUE(contains(ms, parse_program("init { } tile { if x >= 7 { shirt = orange } }")));
  EXPECT_TRUE(contains(ms, parse_program("init { } tile { if x >= 9 { shirt = orange } }")));
  EXPECT_TRUE(contains(ms, parse_program("init { } tile { if x > 8 { shirt = orange } }")));
  EXPECT_TRUE(contains(ms, parse_program("init { } tile { if x <= 8 { shirt = orange } }")));
  for (const auto& m : ms) {
    const auto* payload = std::get_if<RelOp>(&m.descriptor->payload);
    EXPECT_FALSE(payload != nullptr && *payload == RelOp::ne) << m.id;
  }
}

TEST(EnumerateMutants, ThresholdsClampToBoard) {
  const auto ms = enumerate_mutants(parse_program("init { } tile { if y >= 15 { hat = red } }"));
  for (const auto& m : ms) EXPECT_TRUE(validate_program(m.program).empty());
  EXPECT_TRUE(contains(ms, parse_program("init { } tile { if y >= 14 { hat = red } }")));
}

TEST(EnumerateMutants, BranchSwapNeedsBothBranches) {
  const Program one = parse_program("init { } tile { if x < 3 { hat = red } }");
  for (const auto& d : mutation_sites(one)) EXPECT_NE(d.op, MutationOperator::branch_swap);
  const Program two = parse_program("init { } tile { if x < 3 { hat = red } else { hat = blue } }");
  EXPECT_TRUE(contains(enumerate_mutants(two),
                       parse_program("init { } tile { if x < 3 { hat = blue } else { hat = red } }")));
}

TEST(ApplyMutation, ReproducesBlueMutant) {
  const Program cut = parse_program(fixtures::kDirtCut);
  const MutationDescriptor d{MutationOperator::color_replacement, {1, 0, 1, 0}, Color::blue};
  EXPECT_EQ(apply_mutation(cut, d), parse_program(fixtures::kBlueMutant));
  EXPECT_EQ(cut, parse_program(fixtures::kDirtCut));
}

TEST(ApplyMutation, SelfMutationRejected) {
  const Program cut = parse_program(fixtures::kDirtCut);
  try {
    apply_mutation(cut, {MutationOperator::color_replacement, {0, 0}, Color::red});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "payload equals original");
  }
}

TEST(ApplyMutation, DeletingOnlyInitAssignment) {
  const Program p = apply_mutation(parse_program(fixtures::kDirtCut),
                                   {MutationOperator::statement_deletion, {0, 0}, std::monostate{}});
  EXPECT_TRUE(p.init.empty());
  EXPECT_EQ(p.on_tile.size(), 1U);
}

TEST(ApplyMutation, Errors) {
  const Program cut = parse_program(fixtures::kDirtCut);
  auto message = [&](const MutationDescriptor& d) {
    try {
      apply_mutation(cut, d);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(message({MutationOperator::color_replacement, {1, 5}, Color::blue}), "location invalid");
  EXPECT_EQ(message({MutationOperator::terrain_replacement, {0, 0}, Terrain::ice}), "location invalid");
  EXPECT_EQ(message({MutationOperator::color_replacement, {0, 0}, 3}), "payload ill-typed for operator");
}

TEST(Descriptor, TextRoundTrip) {
  const Program cut = parse_program(
      "init { mood = 1 } tile { if terrain == ice or mood >= 2 { shirt = red } else { hat = blue } }");
  for (const auto& d : mutation_sites(cut)) {
    EXPECT_EQ(parse_descriptor(to_text(d)), d) << to_text(d);
  }
  EXPECT_THROW(parse_descriptor("color_replacement 0.0"), Error);
  EXPECT_THROW(parse_descriptor("recolor 0.0 red"), Error);
}

TEST(Equivalence, DeadWaterBranch) {
  const Board board = fixtures::corridor();
  const Program cut = parse_program("init { shirt = red } tile { if terrain == water { hat = blue } }");
  const MutantProgram m{"dead", parse_program("init { shirt = red } tile { if terrain == water { hat = green } }"), {}};
  EXPECT_TRUE(is_equivalent(board, cut, m));
}

TEST(Equivalence, BlueMutantOnLevel1IsNot) {
  const auto& level = fixtures::bundled(1);
  const MutantProgram m{"blue", parse_program(fixtures::kBlueMutant), {}};
  EXPECT_FALSE(is_equivalent(level.board, level.cut, m));
}

TEST(Equivalence, IntegerCoordinatesMakeGreaterEqualAndGreaterAlike) {
  const Program cut = parse_program("init { shirt = red } tile { if x >= 8 { shirt = orange } }");
  const Program alt = parse_program("init { shirt = red } tile { if x > 7 { shirt = orange } }");
  // exhaustive comparison over every tile context of the board
  for (int x = 0; x < kBoardSize; ++x) {
    for (int y = 0; y < kBoardSize; ++y) {
      for (Terrain t : kWalkableTerrains) {
        const TileContext ctx{x, y, t};
        ASSERT_EQ(exec_tile(cut, exec_init(cut), ctx), exec_tile(alt, exec_init(alt), ctx));
      }
    }
  }
  EXPECT_TRUE(is_equivalent(fixtures::strip(), cut, MutantProgram{"alt", alt, {}}));
}

TEST(MutationProperty, EnumerateAgreesWithApply) {
  gen::Rng rng(21);
  gen::ProgramGen g(rng);
  for (int i = 0; i < 150; ++i) {
    const Program cut = g.program();
    std::set<std::string> ids;
    for (const auto& m : enumerate_mutants(cut)) {
      ASSERT_TRUE(m.descriptor.has_value());
      EXPECT_EQ(apply_mutation(cut, *m.descriptor), m.program);
      EXPECT_NE(m.program, cut);
      EXPECT_TRUE(validate_program(m.program).empty());
      EXPECT_TRUE(ids.insert(m.id).second);
    }
  }
}

TEST(MutationProperty, EquivalentMutantsBehaveIdentically) {
  const Program cut = parse_program("init { shirt = red } tile { if x >= 8 { shirt = orange } }");
  const Program alt = parse_program("init { shirt = red } tile { if x > 7 { shirt = orange } }");
  LevelDefinition with_mutant;
  with_mutant.board = fixtures::strip();
  with_mutant.cut = cut;
  with_mutant.healthy_count = 10;
  with_mutant.mutants.push_back({MutantProgram{"alt", alt, {}}, 10});
  LevelDefinition with_cut = with_mutant;
  with_cut.mutants[0].mutant.program = cut;

  gen::Rng rng(22);
  gen::ProgramGen g(rng);
  const auto tiles = observable_tiles(with_mutant.board, distance_field(with_mutant.board));
  for (int i = 0; i < 100; ++i) {
    std::vector<PortalPlacement> portals;
    std::set<TileCoord> used;
    for (int k = rng.between(0, 3); k > 0; --k) {
      const TileCoord t = rng.pick(tiles);
      if (used.insert(t).second) portals.push_back({t, g.predicate({})});
    }
    SimConfig config;
    config.seed = rng.engine()();
    EXPECT_EQ(run(with_mutant, portals, config).outcome, run(with_cut, portals, config).outcome);
  }
}
