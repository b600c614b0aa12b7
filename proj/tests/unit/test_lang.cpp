#include <gtest/gtest.h>

#include "critters/lang.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "reference.hpp"

using namespace critters;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_program(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string predicate_error_of(const std::string& text) {
  try {
    parse_predicate(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Parse, DirtProgram) {
  const Program p = parse_program(fixtures::kDirtCut);
  ASSERT_EQ(p.init.size(), 1U);
  ASSERT_EQ(p.on_tile.size(), 1U);
  EXPECT_EQ(p.init[0], set_attr(Attribute::shirt, Color::red));
  EXPECT_EQ(p.on_tile[0], if_then(terrain_is(Terrain::dirt), {set_attr(Attribute::shirt, Color::orange)}));
}

TEST(Parse, EmptyProgram) {
  const Program p = parse_program("init { } tile { }");
  EXPECT_TRUE(p.init.empty());
  EXPECT_TRUE(p.on_tile.empty());
}

TEST(Parse, UninitializedVariable) {
  EXPECT_NE(error_of("init { } tile { if mood >= 2 { shirt = blue } }").find("uninitialized variable mood"),
            std::string::npos);
}

TEST(Parse, VariableWrittenOnlyInTileIsUninitialized) {
  EXPECT_NE(error_of("init { } tile { mood = 1 }").find("uninitialized variable mood"), std::string::npos);
}

TEST(Parse, UnknownNames) {
  EXPECT_NE(error_of("init { shirt = mauve } tile { }").find("unknown color"), std::string::npos);
  EXPECT_NE(error_of("init { } tile { if terrain == lava { } }").find("unknown terrain"), std::string::npos);
  EXPECT_FALSE(error_of("init { cape = red } tile { }").empty());
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  try {
    parse_program("init { shirt = red }\ntile { if x >= { } }");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Parse, KeywordsAreCaseInsensitive) {
  EXPECT_EQ(parse_program("INIT { Shirt = RED } Tile { IF Terrain == Dirt { shirt = orange } }"),
            parse_program(fixtures::kDirtCut));
}

TEST(Parse, AndBindsTighterThanOr) {
  const Program p = parse_program(
      "init { } tile { if terrain == ice or x >= 3 and y < 2 { hat = blue } }");
  const auto& cond = std::get<If>(p.on_tile[0].node).cond;
  ASSERT_TRUE(std::holds_alternative<Or>(cond.node));
  EXPECT_TRUE(std::holds_alternative<And>(std::get<Or>(cond.node).right->node));
}

TEST(Parse, ParenthesesOverridePrecedence) {
  const Program p = parse_program(
      "init { } tile { if (terrain == ice or x >= 3) and y < 2 { hat = blue } }");
  EXPECT_TRUE(std::holds_alternative<And>(std::get<If>(p.on_tile[0].node).cond.node));
}

TEST(Parse, NestingLimit) {
  EXPECT_NO_THROW(parse_program(
      "init { } tile { if x < 1 { if x < 2 { if x < 3 { hat = red } } } }"));
  EXPECT_NE(error_of("init { } tile { if x < 1 { if x < 2 { if x < 3 { if x < 4 { hat = red } } } } }")
                .find("if nesting deeper than 3"),
            std::string::npos);
}

TEST(Parse, CoordinateRules) {
  EXPECT_NE(error_of("init { } tile { if x >= 16 { } }").find("coordinate bound out of range"),
            std::string::npos);
  EXPECT_FALSE(error_of("init { } tile { if x != 3 { } }").empty());
}

TEST(Parse, InitAcceptsAssignmentsOnly) {
  EXPECT_FALSE(error_of("init { if x < 3 { shirt = red } } tile { }").empty());
}

TEST(Parse, OptionalSemicolons) {
  EXPECT_EQ(parse_program("init { shirt = red; hat = blue; } tile { }"),
            parse_program("init { shirt = red hat = blue } tile { }"));
}

TEST(Parse, EmptyElseEqualsAbsentElse) {
  EXPECT_EQ(parse_program("init { } tile { if x < 3 { hat = red } else { } }"),
            parse_program("init { } tile { if x < 3 { hat = red } }"));
}

TEST(Predicate, Examples) {
  EXPECT_EQ(parse_predicate("pass if shirt == orange").conjuncts.size(), 1U);
  EXPECT_TRUE(parse_predicate("pass always").conjuncts.empty());
  EXPECT_NE(predicate_error_of("pass if shirt == mauve").find("unknown color"), std::string::npos);
  EXPECT_NE(predicate_error_of("pass if shirt == red and shirt == blue").find("duplicate test on attribute shirt"),
            std::string::npos);
  EXPECT_EQ(parse_predicate("pass if shirt == orange and steps >= 3").conjuncts.size(), 2U);
}

TEST(ExecInit, DirtProgram) {
  const CritterState s = exec_init(parse_program(fixtures::kDirtCut));
  EXPECT_EQ(s.get(Attribute::shirt), Color::red);
  EXPECT_EQ(s.get(Attribute::hat), Color::white);
  EXPECT_EQ(s.get(Attribute::hair), Color::black);
}

TEST(ExecInit, DefaultsAndVariables) {
  const CritterState s = exec_init(parse_program("init { } tile { }"));
  EXPECT_EQ(s, CritterState{});
  const CritterState v = exec_init(parse_program("init { steps = 0 } tile { }"));
  ASSERT_EQ(v.variables.count("steps"), 1U);
  EXPECT_EQ(v.variables.at("steps"), 0);
}

TEST(ExecTile, CutAndBlueMutantOnDirt) {
  CritterState red;
  red.set(Attribute::shirt, Color::red);
  const TileContext dirt{8, 8, Terrain::dirt};
  EXPECT_EQ(exec_tile(parse_program(fixtures::kDirtCut), red, dirt).get(Attribute::shirt), Color::orange);
  EXPECT_EQ(exec_tile(parse_program(fixtures::kBlueMutant), red, dirt).get(Attribute::shirt), Color::blue);
  // value semantics: the input is untouched
  EXPECT_EQ(red.get(Attribute::shirt), Color::red);
}

TEST(ExecTile, DirtProgramOnGrassUnchanged) {
  CritterState red;
  red.set(Attribute::shirt, Color::red);
  EXPECT_EQ(exec_tile(parse_program(fixtures::kDirtCut), red, {3, 8, Terrain::grass}), red);
}

TEST(EvalPredicate, Examples) {
  CritterState s;
  s.set(Attribute::shirt, Color::orange);
  EXPECT_TRUE(eval_predicate(parse_predicate("pass if shirt == orange"), s));
  EXPECT_TRUE(eval_predicate(parse_predicate("pass always"), CritterState{}));
  s.variables["steps"] = 2;
  EXPECT_FALSE(eval_predicate(parse_predicate("pass if shirt == orange and steps >= 3"), s));
  // a variable the critter lacks fails its conjunct
  EXPECT_FALSE(eval_predicate(parse_predicate("pass if energy == 0"), CritterState{}));
}

TEST(Printer, CanonicalForm) {
  EXPECT_EQ(to_text(parse_program("INIT{shirt=red}TILE{if terrain==dirt{shirt=orange}}")),
            "init {\n  shirt = red\n}\ntile {\n  if terrain == dirt {\n    shirt = orange\n  }\n}\n");
  EXPECT_EQ(to_text(parse_predicate("PASS ALWAYS")), "pass always");
  EXPECT_EQ(to_text(parse_predicate("pass if shirt==red and mood>=2")), "pass if shirt == red and mood >= 2");
}

TEST(Printer, KeepsNeededParentheses) {
  const std::string text = "init { } tile { if (terrain == ice or x >= 3) and y < 2 { hat = blue } }";
  EXPECT_EQ(parse_program(to_text(parse_program(text))), parse_program(text));
}

// Property tests over generated programs.

TEST(LangProperty, RoundTripIsIdentity) {
  gen::Rng rng(11);
  gen::ProgramGen g(rng);
  for (int i = 0; i < 500; ++i) {
    const Program p = g.program();
    ASSERT_TRUE(validate_program(p).empty()) << to_text(p);
    const std::string text = to_text(p);
    const Program back = parse_program(text);
    ASSERT_EQ(back, p) << text;
    ASSERT_EQ(to_text(back), text);
  }
}

TEST(LangProperty, MatchesReferenceEvaluator) {
  gen::Rng rng(12);
  gen::ProgramGen g(rng);
  for (int i = 0; i < 300; ++i) {
    const Program p = g.program();
    CritterState s = exec_init(p);
    ref::State r = ref::start(p);
    ASSERT_TRUE(ref::same(r, s)) << to_text(p);
    for (const TileContext& ctx : gen::random_walk(rng, 6)) {
      s = exec_tile(p, s, ctx);
      r = ref::step(p, r, ref::tile_of(ctx));
      ASSERT_TRUE(ref::same(r, s)) << to_text(p);
    }
  }
}

TEST(LangProperty, DeterministicAndPure) {
  gen::Rng rng(13);
  gen::ProgramGen g(rng);
  for (int i = 0; i < 200; ++i) {
    const Program p = g.program();
    const TileContext ctx{rng.between(0, 15), rng.between(0, 15), rng.pick(kWalkableTerrains)};
    const CritterState start = exec_init(p);
    const CritterState copy = start;
    EXPECT_EQ(exec_tile(p, start, ctx), exec_tile(p, start, ctx));
    EXPECT_EQ(start, copy);
  }
}

TEST(LangProperty, SequencingFolds) {
  gen::Rng rng(14);
  gen::ProgramGen g(rng);
  for (int i = 0; i < 200; ++i) {
    Program a = g.program();
    Program b = a;
    b.on_tile = g.program().on_tile;
    // only keep b's statements when they use a's variables
    if (!validate_program(Program{a.init, b.on_tile}).empty()) continue;
    Program ab{a.init, a.on_tile};
    ab.on_tile.insert(ab.on_tile.end(), b.on_tile.begin(), b.on_tile.end());
    const TileContext ctx{rng.between(0, 15), rng.between(0, 15), rng.pick(kWalkableTerrains)};
    const CritterState s = exec_init(a);
    Program only_b{a.init, b.on_tile};
    EXPECT_EQ(exec_tile(ab, s, ctx), exec_tile(only_b, exec_tile(a, s, ctx), ctx));
  }
}

TEST(LangProperty, PredicateMatchesReference) {
  gen::Rng rng(15);
  gen::ProgramGen g(rng);
  for (int i = 0; i < 300; ++i) {
    const Program p = g.program();
    const Predicate pred = g.predicate(declared_variables(p));
    ASSERT_EQ(parse_predicate(to_text(pred)), pred);
    CritterState s = exec_init(p);
    ref::State r = ref::start(p);
    for (const TileContext& ctx : gen::random_walk(rng, 4)) {
      s = exec_tile(p, s, ctx);
      r = ref::step(p, r, ref::tile_of(ctx));
      ASSERT_EQ(eval_predicate(pred, s), ref::passes(pred, r)) << to_text(pred);
    }
  }
}
