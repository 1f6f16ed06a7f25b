#include "invsynth/errors.hpp"
#include "invsynth/expr.hpp"

#include <gtest/gtest.h>

namespace {

using namespace invsynth;

Expr x() { return Expr::var("x"); }
Expr y() { return Expr::var("y"); }

TEST(Expr, DefaultIsTrue) {
  Expr e;
  EXPECT_TRUE(e.is_true());
  EXPECT_EQ(e.sort(), Sort::Bool);
}

TEST(Expr, ConstructorsTypeCheck) {
  EXPECT_THROW(Expr::make(Op::Add, {x(), Expr::bool_const(true)}), TypeError);
  EXPECT_THROW(Expr::make(Op::And, {x(), Expr::bool_const(true)}), TypeError);
  EXPECT_THROW(Expr::make(Op::Lt, {Expr::bool_const(true), x()}), TypeError);
  EXPECT_THROW(eq(x(), Expr::bool_const(false)), TypeError);
  EXPECT_THROW(ite(x(), x(), y()), TypeError);
  EXPECT_THROW(ite(lt(x(), y()), x(), Expr::bool_const(true)), TypeError);
  EXPECT_THROW(Expr::make(Op::Not, {x()}), TypeError);
  EXPECT_NO_THROW(ite(lt(x(), y()), x(), y()));
}

TEST(Expr, AccessorsOnWrongNodeThrow) {
  EXPECT_ANY_THROW(x().int_value());
  EXPECT_ANY_THROW(lit(3).name());
}

TEST(Expr, StructuralEquality) {
  EXPECT_EQ(x() + lit(1), x() + lit(1));
  EXPECT_FALSE(x() + lit(1) == lit(1) + x());
  EXPECT_FALSE(Expr::var("x", Sort::Int) == Expr::var("x", Sort::Bool));
}

TEST(Expr, ToSmtRendersNegativesAsUnaryMinus) {
  EXPECT_EQ(to_smt(lit(-5)), "(- 5)");
  EXPECT_EQ(to_smt(lit(7)), "7");
  EXPECT_EQ(to_smt(le(x(), lit(-1))), "(<= x (- 1))");
  EXPECT_EQ(to_smt(-x()), "(- x)");
}

TEST(Expr, ToSmtShapes) {
  EXPECT_EQ(to_smt(x() - y()), "(- x y)");
  EXPECT_EQ(to_smt(ne(x(), y())), "(not (= x y))");
  EXPECT_EQ(to_smt(implies(lt(x(), y()), ge(x(), lit(0)))), "(=> (< x y) (>= x 0))");
  EXPECT_EQ(to_smt(Expr::bool_const(false)), "false");
}

TEST(Expr, ToSmtRejectsNondet) {
  EXPECT_ANY_THROW(to_smt(Expr::nondet(Sort::Int) + x()));
}

TEST(Expr, EuclideanDivMod) {
  struct Case {
    long long a, b, q, r;
  };
  for (auto c : {Case{7, 2, 3, 1}, Case{-7, 2, -4, 1}, Case{7, -2, -3, 1}, Case{-7, -2, 4, 1}, Case{6, 3, 2, 0},
                 Case{-6, 3, -2, 0}, Case{0, 5, 0, 0}}) {
    EXPECT_EQ(smt_div(c.a, c.b), c.q) << c.a << " div " << c.b;
    EXPECT_EQ(smt_mod(c.a, c.b), c.r) << c.a << " mod " << c.b;
    EXPECT_EQ(BigInt(c.b) * smt_div(c.a, c.b) + smt_mod(c.a, c.b), c.a);
  }
  EXPECT_THROW(smt_div(1, 0), EvalError);
}

TEST(Expr, EvaluateUsesUnboundedIntegers) {
  Env env{{"x", BigInt("9223372036854775807")}};
  EXPECT_EQ(evaluate_int(x() + lit(1), env), BigInt("9223372036854775808"));
}

TEST(Expr, EvaluateErrors) {
  EXPECT_THROW(evaluate_int(x(), {}), EvalError);
  EXPECT_THROW(evaluate(Expr::nondet(Sort::Bool), {}), EvalError);
  EXPECT_THROW(evaluate_int(Expr::make(Op::Div, {lit(1), lit(0)}), {}), EvalError);
}

TEST(Expr, EvaluateConnectives) {
  Env env{{"x", BigInt(3)}, {"y", BigInt(-2)}};
  EXPECT_TRUE(evaluate_bool(gt(x(), y()) && ne(x(), y()), env));
  EXPECT_FALSE(evaluate_bool(implies(gt(x(), y()), lt(x(), y())), env));
  EXPECT_TRUE(evaluate_bool(!eq(x(), y()) || Expr::bool_const(false), env));
  EXPECT_EQ(evaluate_int(ite(lt(x(), y()), x(), y() * lit(5)), env), -10);
}

TEST(Expr, SubstituteIsSimultaneous) {
  auto e = x() + y() * lit(2);
  auto s = substitute(e, {{"x", y()}, {"y", x()}});
  EXPECT_EQ(s, y() + x() * lit(2));
}

TEST(Expr, SubstituteLeavesOtherVariables) {
  auto e = le(x(), Expr::var("z"));
  EXPECT_EQ(substitute(e, {{"x", lit(0)}}), le(lit(0), Expr::var("z")));
}

TEST(Expr, FreeVarsInFirstOccurrenceOrder) {
  auto e = lt(y() + x(), y() - Expr::var("w"));
  EXPECT_EQ(free_vars(e), (std::vector<std::string>{"y", "x", "w"}));
}

TEST(Expr, AndOfOrOf) {
  EXPECT_TRUE(and_of({}).is_true());
  EXPECT_TRUE(or_of({}).is_false());
  auto a = lt(x(), y());
  EXPECT_EQ(and_of({a}), a);
  EXPECT_EQ(to_smt(and_of({a, ge(x(), lit(0))})), "(and (< x y) (>= x 0))");
}

TEST(Expr, CollectIntConstsAndSize) {
  std::set<BigInt> consts;
  collect_int_consts(le(x() + lit(3), lit(-4)), consts);
  EXPECT_EQ(consts, (std::set<BigInt>{3, -4}));
  EXPECT_EQ(expr_size(x() + lit(3)), 3u);
  EXPECT_TRUE(contains_nondet(x() + Expr::nondet(Sort::Int)));
  EXPECT_FALSE(contains_nondet(x() + lit(1)));
  EXPECT_TRUE(contains_op(ite(lt(x(), y()), x(), y()), Op::Ite));
}

}  // namespace
