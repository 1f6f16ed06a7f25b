#include "invsynth/errors.hpp"
#include "invsynth/program.hpp"
#include "invsynth/solver.hpp"
#include "invsynth/vcgen.hpp"
#include "smt_eval.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sys/stat.h>

namespace {

using namespace invsynth;
using testing_support::TempDir;

const SortMap kXY{{"x", Sort::Int}, {"y", Sort::Int}, {"b", Sort::Bool}};

std::filesystem::path fake_solver(const TempDir& dir, const std::string& name, const std::string& body) {
  auto p = dir / name;
  testing_support::write_file(p, "#!/bin/sh\n" + body);
  ::chmod(p.c_str(), 0755);
  return p;
}

TEST(Classify, Unsat) { EXPECT_TRUE(is_valid(classify_output("unsat\n", "", 0, false, kXY))); }

TEST(Classify, SatWithModel) {
  auto v = classify_output(
      "sat\n(\n  (define-fun y () Int\n    (- 3))\n  (define-fun x () Int\n    12)\n  (define-fun b () Bool true)\n)\n", "",
      0, false, kXY);
  ASSERT_TRUE(std::holds_alternative<Counterexample>(v));
  const auto& m = std::get<Counterexample>(v).model;
  EXPECT_EQ(m.ints.at("x"), 12);
  EXPECT_EQ(m.ints.at("y"), -3);
  EXPECT_TRUE(m.bools.at("b"));
  EXPECT_TRUE(m.defaulted.empty());
}

TEST(Classify, MissingVariablesDefaultAndAreFlagged) {
  auto v = classify_output("sat\n(model (define-fun x () Int 4))\n", "", 0, false, kXY);
  const auto& m = std::get<Counterexample>(v).model;
  EXPECT_EQ(m.ints.at("y"), 0);
  EXPECT_FALSE(m.bools.at("b"));
  EXPECT_EQ(m.defaulted, (std::set<std::string>{"y", "b"}));
  EXPECT_NE(m.render().find("y = 0  (unconstrained)"), std::string::npos);
  EXPECT_NE(m.render().find("x = 4\n"), std::string::npos);
}

TEST(Classify, ErrorsBeforeAnswerAreParseErrors) {
  auto v = classify_output("(error \"line 7 column 55: unknown constant z\")\nsat\n(error \"model is not available\")\n",
                           "", 1, false, kXY);
  ASSERT_TRUE(std::holds_alternative<ParseError>(v));
  EXPECT_EQ(std::get<ParseError>(v).message, "(error \"line 7 column 55: unknown constant z\")");
}

TEST(Classify, OtherOutcomes) {
  EXPECT_TRUE(std::holds_alternative<Timeout>(classify_output("", "", 137, true, kXY)));
  EXPECT_TRUE(std::holds_alternative<SolverFailure>(classify_output("unknown\n", "", 0, false, kXY)));
  EXPECT_TRUE(std::holds_alternative<SolverFailure>(classify_output("", "", 0, false, kXY)));
  EXPECT_TRUE(std::holds_alternative<SolverFailure>(classify_output("hello world\n", "", 0, false, kXY)));
  EXPECT_TRUE(std::holds_alternative<SolverFailure>(classify_output("sat\n((define-fun x\n", "", 0, false, kXY)));
  EXPECT_TRUE(std::holds_alternative<SolverFailure>(classify_output("", "", 139, false, kXY)));
  EXPECT_TRUE(std::holds_alternative<ParseError>(classify_output("", "bad option\n", 1, false, kXY)));
}

TEST(ParseModel, Forms) {
  auto m = parse_model("((define-fun x () Int (- 7)) (define-fun f ((a Int)) Int a))", {{"x", Sort::Int}});
  EXPECT_EQ(m.ints.at("x"), -7);
  EXPECT_EQ(m.ints.count("f"), 0u);
  EXPECT_THROW(parse_model("((define-fun x () Int (+ 1 y)))", {}), SolverError);
  EXPECT_THROW(parse_model("((define-fun x Int 1))", {}), SolverError);
  EXPECT_THROW(parse_model("((", {}), SolverError);
  EXPECT_EQ(parse_model("sat", {{"x", Sort::Int}}).defaulted, std::set<std::string>{"x"});
}

TEST(ParseModel, BigValuesAreExact) {
  auto m = parse_model("((define-fun x () Int 123456789012345678901234567890))", {});
  EXPECT_EQ(m.ints.at("x"), BigInt("123456789012345678901234567890"));
}

TEST(Names, Verdicts) {
  EXPECT_STREQ(verdict_name(Valid{}), "Valid");
  EXPECT_STREQ(verdict_name(Counterexample{}), "Counterexample");
  EXPECT_STREQ(verdict_name(ParseError{}), "ParseError");
  EXPECT_STREQ(verdict_name(Timeout{}), "Timeout");
  EXPECT_STREQ(verdict_name(SolverFailure{}), "SolverFailure");
}

TEST(DeclaredConstants, ScriptsAndMalformedText) {
  auto d = declared_constants("(declare-const x Int)(declare-fun b () Bool)(declare-fun f (Int) Int)");
  EXPECT_EQ(d, (SortMap{{"x", Sort::Int}, {"b", Sort::Bool}}));
  auto m = declared_constants("(declare-const x Int)\n(assert (and (<= x 1)\n");
  EXPECT_EQ(m, (SortMap{{"x", Sort::Int}}));
}

TEST(ScriptHolds, Evaluates) {
  Model m;
  m.ints = {{"x", 3}};
  EXPECT_TRUE(script_assertion_holds("(declare-const x Int)(assert (> x 2))(check-sat)", m));
  EXPECT_FALSE(script_assertion_holds("(declare-const x Int)(assert (> x 5))(check-sat)", m));
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.timeout = std::chrono::milliseconds(0);
  EXPECT_ANY_THROW(c.validate());
  c.timeout = std::chrono::milliseconds(10);
  c.executable = "";
  EXPECT_ANY_THROW(c.validate());
}

TEST(CheckScript, TautologyIsValid) {
  REQUIRE_SOLVER();
  auto r = check_script("(declare-const x Int)(assert (not (= x x)))(check-sat)(get-model)", testing_support::solver());
  EXPECT_TRUE(is_valid(r.verdict)) << r.output;
  EXPECT_GT(r.elapsed_ms, 0);
  EXPECT_GT(r.peak_memory_mb, 0);
}

TEST(CheckScript, UndeclaredSymbolIsParseError) {
  REQUIRE_SOLVER();
  auto r = check_script("(declare-const x Int)(assert (> x y))(check-sat)(get-model)", testing_support::solver());
  ASSERT_TRUE(std::holds_alternative<ParseError>(r.verdict)) << r.output;
  EXPECT_NE(std::get<ParseError>(r.verdict).message.find("(error"), std::string::npos);
}

TEST(CheckScript, ArityErrorIsParseError) {
  REQUIRE_SOLVER();
  auto r = check_script("(declare-const x Int)(assert (not x (> x 1)))(check-sat)(get-model)", testing_support::solver());
  EXPECT_TRUE(std::holds_alternative<ParseError>(r.verdict)) << r.output;
}

TEST(CheckScript, Benchmark122WeakCandidateFailsPost) {
  REQUIRE_SOLVER();
  auto t = make_template(parse_program(testing_support::kBench122));
  auto vc = splice(t, Invariant::from_text(testing_support::kWeak122, t.sorts()));
  auto cfg = testing_support::solver();
  EXPECT_TRUE(is_valid(check_script(vc.init_script, cfg).verdict));
  EXPECT_TRUE(is_valid(check_script(vc.inductive_script, cfg).verdict));
  auto post = check_script(vc.post_script, cfg);
  ASSERT_TRUE(std::holds_alternative<Counterexample>(post.verdict)) << post.output;
  const auto& m = std::get<Counterexample>(post.verdict).model;
  for (const char* v : {"i", "size", "sn"}) EXPECT_EQ(m.ints.count(v), 1u) << v;
  BigInt i = m.ints.at("i"), size = m.ints.at("size"), sn = m.ints.at("sn");
  EXPECT_EQ(sn, i - 1);
  EXPECT_GT(i, size);
  EXPECT_TRUE(sn != size && sn != 0);
  oracle::GroundEnv env;
  for (const auto& [k, v] : m.ints) env.ints[k] = static_cast<std::int64_t>(v);
  EXPECT_TRUE(oracle::script_holds(vc.post_script, env));
  EXPECT_TRUE(script_assertion_holds(vc.post_script, m));
}

TEST(CheckScript, TimeoutKillsSolver) {
  TempDir dir;
  SolverConfig c;
  c.executable = fake_solver(dir, "slow.sh", "exec sleep 30\n").string();
  for (int ms : {50, 200, 500}) {
    c.timeout = std::chrono::milliseconds(ms);
    auto start = std::chrono::steady_clock::now();
    auto r = check_script("(check-sat)", c);
    double took = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    EXPECT_TRUE(std::holds_alternative<Timeout>(r.verdict)) << verdict_name(r.verdict);
    EXPECT_LT(took, ms + 1000.0);
    EXPECT_GE(took, ms * 0.9);
  }
}

TEST(CheckScript, TimeoutOnRealSolver) {
  REQUIRE_SOLVER();
  auto c = testing_support::solver();
  c.timeout = std::chrono::milliseconds(1);
  auto r = check_script("(declare-const x Int)(assert (> x 0))(check-sat)", c);
  EXPECT_TRUE(std::holds_alternative<Timeout>(r.verdict) || std::holds_alternative<Counterexample>(r.verdict));
}

TEST(CheckScript, GarbageOutputIsSolverFailure) {
  TempDir dir;
  SolverConfig c;
  c.executable = fake_solver(dir, "garbage.sh", "echo 'segmentation fault (core dumped'\nexit 0\n").string();
  auto r = check_script("(check-sat)", c);
  EXPECT_TRUE(std::holds_alternative<SolverFailure>(r.verdict)) << verdict_name(r.verdict);
}

TEST(CheckScript, FakeSolverReceivesScriptPath) {
  TempDir dir;
  SolverConfig c;
  c.executable = fake_solver(dir, "cat.sh", "case \"$1\" in *.smt2) echo unsat ;; *) echo sat ;; esac\n").string();
  EXPECT_TRUE(is_valid(check_script("(check-sat)", c).verdict));
}

TEST(CheckScript, MissingExecutableIsSolverFailure) {
  SolverConfig c;
  c.executable = "/nonexistent/definitely-not-a-solver";
  auto r = check_script("(check-sat)", c);
  EXPECT_TRUE(std::holds_alternative<SolverFailure>(r.verdict));
}

}  // namespace
