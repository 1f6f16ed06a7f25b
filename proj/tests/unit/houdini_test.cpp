#include "invsynth/houdini.hpp"
#include "invsynth/orchestrator.hpp"
#include "invsynth/program.hpp"
#include "invsynth/vcgen.hpp"
#include "smt_eval.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace invsynth;

bool pool_has(const std::vector<Expr>& pool, const std::string& smt) {
  for (const auto& e : pool)
    if (to_smt(e) == smt) return true;
  return false;
}

// Some pool atom agrees with `smt` on every (x, y) in [-8, 8]^2.
bool pool_has_equivalent(const std::vector<Expr>& pool, const std::string& smt) {
  for (const auto& e : pool) {
    bool same = true;
    for (std::int64_t x = -8; x <= 8 && same; ++x)
      for (std::int64_t y = -8; y <= 8 && same; ++y) {
        oracle::GroundEnv env{{{"x", x}, {"y", y}}, {}};
        same = oracle::eval_smt_bool(to_smt(e), env) == oracle::eval_smt_bool(smt, env);
      }
    if (same) return true;
  }
  return false;
}

TEST(AtomPool, ShapesAndConstants) {
  auto pool = houdini_atom_pool({"x", "y"}, {BigInt(5)});
  for (const char* a : {"(<= x 5)", "(>= x 0)", "(= y 6)", "(<= x (- 1))", "(<= (- x y) 4)", "(>= (- y x) 0)",
                        "(<= (+ x y) 5)", "(= x (+ y 1))"})
    EXPECT_TRUE(pool_has_equivalent(pool, a)) << a;
  EXPECT_FALSE(pool_has_equivalent(pool, "(<= x 7)"));
  for (const auto& e : pool) EXPECT_EQ(e.sort(), Sort::Bool);
}

TEST(AtomPool, NoDuplicates) {
  auto pool = houdini_atom_pool({"x", "y", "z"}, {BigInt(0), BigInt(1), BigInt(10), BigInt(-1)});
  std::set<std::string> seen;
  for (const auto& e : pool) EXPECT_TRUE(seen.insert(to_smt(e)).second) << to_smt(e);
  EXPECT_FALSE(pool_has(pool, "(<= (+ y x) 0)") && pool_has(pool, "(<= (+ x y) 0)"));
}

TEST(AtomPool, SingleVariableHasNoPairs) {
  auto pool = houdini_atom_pool({"x"}, {});
  for (const auto& e : pool) EXPECT_EQ(free_vars(e), std::vector<std::string>{"x"});
  EXPECT_EQ(pool.size(), 3u * 3u);
}

TEST(Houdini, CountUpFindsBounds) {
  REQUIRE_SOLVER();
  auto p = parse_program(testing_support::read_file(testing_support::corpus_dir() / "count_up.c"));
  auto t = make_template(p);
  auto r = houdini_synthesize(p, t, testing_support::solver());
  ASSERT_TRUE(r.success) << r.failure;
  EXPECT_TRUE(pool_has(r.surviving, "(<= x 5)"));
  EXPECT_TRUE(pool_has(r.surviving, "(>= x 0)"));
  ASSERT_TRUE(r.invariant.formula);
  ASSERT_FALSE(r.pool_sizes.empty());
  for (std::size_t k = 1; k < r.pool_sizes.size(); ++k) EXPECT_LE(r.pool_sizes[k], r.pool_sizes[k - 1]);
  EXPECT_EQ(r.pool_sizes.back(), r.surviving.size());
  auto checks = verify_only(Problem::from_source(testing_support::read_file(testing_support::corpus_dir() / "count_up.c"), "count_up"),
                            r.invariant, testing_support::solver());
  for (const auto& c : checks) EXPECT_TRUE(is_valid(c.verdict)) << verdict_name(c.verdict);
}

TEST(Houdini, FalsePostFails) {
  REQUIRE_SOLVER();
  auto p = parse_program("int x; x = 0; while (x < 5) { x = x + 1; } assert(x == 6);");
  auto r = houdini_synthesize(p, make_template(p), testing_support::solver());
  EXPECT_FALSE(r.success);
  EXPECT_FALSE(r.failure.empty());
}

TEST(Houdini, LoopNeverEntered) {
  REQUIRE_SOLVER();
  auto p = parse_program("int x; x = 3; while (x < 0) { x = x - 1; } assert(x == 3);");
  auto r = houdini_synthesize(p, make_template(p), testing_support::solver());
  ASSERT_TRUE(r.success) << r.failure;
  EXPECT_TRUE(pool_has(r.surviving, "(= x 3)"));
}

TEST(Houdini, DeterministicAcrossSeeds) {
  REQUIRE_SOLVER();
  auto p = parse_program(testing_support::kBench122);
  auto t = make_template(p);
  auto a = houdini_synthesize(p, t, testing_support::solver(), 1);
  auto b = houdini_synthesize(p, t, testing_support::solver(), 1);
  auto c = houdini_synthesize(p, t, testing_support::solver(), 99);
  EXPECT_EQ(a.invariant.smt_text, b.invariant.smt_text);
  std::set<std::string> sa, sc;
  for (const auto& e : a.surviving) sa.insert(to_smt(e));
  for (const auto& e : c.surviving) sc.insert(to_smt(e));
  EXPECT_EQ(sa, sc);
  EXPECT_EQ(a.success, c.success);
}

TEST(Houdini, TemplateOnlyInput) {
  REQUIRE_SOLVER();
  auto text = testing_support::read_file(testing_support::data_dir() / "count_up.smt2t");
  auto prob = Problem::from_template(text, "count_up");
  auto r = houdini_synthesize(*prob.tmpl, prob.literals(), testing_support::solver());
  EXPECT_TRUE(r.success) << r.failure;
}

TEST(HoudiniProposer, RepeatsFixpoint) {
  REQUIRE_SOLVER();
  auto prob = Problem::from_source(testing_support::read_file(testing_support::corpus_dir() / "lockstep.c"), "lockstep");
  HoudiniProposer hp(testing_support::solver(), 0);
  ProposalContext ctx;
  ctx.problem_name = prob.name;
  ctx.tmpl = prob.tmpl;
  ctx.program = prob.program;
  ctx.literals = prob.literals();
  auto first = hp.propose(ctx);
  EXPECT_TRUE(hp.last_result().success);
  EXPECT_EQ(first.proposer_id, "houdini");
  ctx.attempt_index = 2;
  ctx.history.push_back({first.candidate.smt_text, "post: Counterexample"});
  ctx.feedback = timeout_feedback(Obligation::Post);
  EXPECT_EQ(hp.propose(ctx).candidate.smt_text, first.candidate.smt_text);
}

}  // namespace
