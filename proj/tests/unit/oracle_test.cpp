#include "explorer.hpp"
#include "gen.hpp"
#include "invsynth/program.hpp"
#include "smt_eval.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace oracle;

TEST(Explorer, CountUpReachesExactlyZeroToFive) {
  auto p = invsynth::parse_program("int x; x = 0; while (x < 5) { x = x + 1; } assert(x == 5);");
  auto e = explore(p);
  EXPECT_FALSE(e.truncated);
  std::set<State> want;
  for (std::int64_t v = 0; v <= 5; ++v) want.insert({v});
  EXPECT_EQ(e.loop_head, want);
  EXPECT_EQ(e.exits, (std::set<State>{{5}}));
}

TEST(Explorer, InitialRangeAndPrecondition) {
  auto p = invsynth::parse_program("int n; assume(n >= 3); while (n > 100) { n = n - 1; } assert(n >= 3);");
  auto e = explore(p);
  EXPECT_EQ(e.loop_head, (std::set<State>{{3}, {4}, {5}}));
}

TEST(Explorer, NondeterministicGuardBothWays) {
  auto p = invsynth::parse_program("int x; x = 0; while (unknown()) { x = x + 1; } assert(x >= 0);");
  ExploreOptions o;
  o.max_iterations = 3;
  auto e = explore(p, o);
  EXPECT_TRUE(e.truncated);
  EXPECT_TRUE(e.exits.count({0}));
  EXPECT_TRUE(e.loop_head.count({1}));
}

TEST(Explorer, HavocUsesNondetRange) {
  auto p = invsynth::parse_program("int x; x = unknown(); while (x > 100) { } assert(1);");
  ExploreOptions o;
  o.nondet_lo = -1;
  o.nondet_hi = 1;
  EXPECT_EQ(explore(p, o).loop_head, (std::set<State>{{-1}, {0}, {1}}));
}

TEST(Explorer, Benchmark122WithoutAssumeHasNegativeSize) {
  auto p = invsynth::parse_program(testing_support::read_file(testing_support::data_dir() / "bench122_no_assume.c"));
  auto e = explore(p);
  bool negative = false;
  for (const auto& s : e.loop_head) negative |= s[1] < 0;
  EXPECT_TRUE(negative);
}

TEST(Explorer, OverflowMarksTruncated) {
  auto p = invsynth::parse_program("int x; x = 2; while (x > 0) { x = x * x; } assert(x > 0);");
  EXPECT_TRUE(explore(p).truncated);
}

TEST(Holds, SomeChoice) {
  auto p = invsynth::parse_program("int x; while (1) { } assert(1);");
  EXPECT_TRUE(holds(p, invsynth::Expr::nondet(invsynth::Sort::Bool), {0}));
  EXPECT_FALSE(holds(p, invsynth::lt(invsynth::Expr::var("x"), invsynth::lit(0)), {0}));
  EXPECT_EQ(render_state({"a", "b"}, {1, -2}), "a=1 b=-2");
}

TEST(SmtEval, Terms) {
  GroundEnv env{{{"x", 7}, {"y", -2}}, {{"b", true}}};
  EXPECT_TRUE(eval_smt_bool("(and (> x y) b (=> false b))", env));
  EXPECT_EQ(eval_smt_int("(+ x (* 2 y) (- 1))", env), 2);
  EXPECT_EQ(eval_smt_int("(div (- 7) 2)", env), -4);
  EXPECT_EQ(eval_smt_int("(mod (- 7) 2)", env), 1);
  EXPECT_EQ(eval_smt_int("(let ((z (+ x 1))) (ite b z 0))", env), 8);
  EXPECT_TRUE(eval_smt_bool("(<= y 0 x)", env));
  EXPECT_TRUE(eval_smt_bool("(distinct x y)", env));
  EXPECT_THROW(eval_smt_int("q", env), SmtEvalError);
  EXPECT_THROW(eval_smt_bool("(foo x)", env), SmtEvalError);
  EXPECT_THROW(eval_smt_bool("(and b", env), SmtEvalError);
}

TEST(SmtEval, Scripts) {
  const char* s = "(declare-const x Int)(declare-const b Bool)(assert (>= x 0))(assert (not b))(check-sat)";
  EXPECT_TRUE(script_holds(s, {}));
  EXPECT_FALSE(script_holds(s, {{{"x", -1}}, {}}));
  EXPECT_EQ(script_declarations(s), (std::map<std::string, std::string>{{"x", "Int"}, {"b", "Bool"}}));
}

TEST(Generator, ProgramsParseAndAreVaried) {
  std::mt19937_64 rng(7);
  std::set<std::string> sources;
  int wrapped = 0, fors = 0, ifs = 0;
  for (int i = 0; i < 200; ++i) {
    auto g = random_program(rng);
    sources.insert(g.source);
    wrapped += g.source.find("main") != std::string::npos;
    fors += g.source.find("for (") != std::string::npos;
    ifs += g.source.find("if (") != std::string::npos;
    EXPECT_NO_THROW(invsynth::parse_program(g.source)) << g.source;
  }
  EXPECT_GT(sources.size(), 190u);
  EXPECT_GT(wrapped, 0);
  EXPECT_GT(fors, 0);
  EXPECT_GT(ifs, 0);
}

TEST(Generator, Deterministic) {
  std::mt19937_64 a(3), b(3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(random_program(a).source, random_program(b).source);
}

}  // namespace
