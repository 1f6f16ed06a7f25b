#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace invsynth {

using BigInt = boost::multiprecision::cpp_int;

enum class Sort { Int, Bool };

enum class Op {
  IntConst,
  BoolConst,
  Var,
  Nondet,
  Neg,
  Add,
  Sub,
  Mul,
  Div,  // SMT-LIB euclidean division; only produced by invariant parsing
  Mod,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
  Implies,
  Ite,
};

const char* to_string(Sort sort) noexcept;

/// Immutable integer/boolean expression tree. Copies share structure.
///
/// Every constructor type-checks its children: arithmetic takes Int,
/// comparisons take Int and yield Bool, connectives take Bool, Eq/Ne/Ite
/// require matching sorts. A violation throws TypeError.
class Expr {
 public:
  /// Default-constructed Expr is the boolean constant `true`.
  Expr();

  static Expr int_const(BigInt value);
  static Expr bool_const(bool value);
  static Expr var(std::string name, Sort sort = Sort::Int);
  static Expr nondet(Sort sort);
  static Expr make(Op op, std::vector<Expr> args);

  Op op() const noexcept;
  Sort sort() const noexcept;
  const BigInt& int_value() const;
  bool bool_value() const;
  const std::string& name() const;
  std::span<const Expr> args() const noexcept;
  const Expr& arg(std::size_t i) const;

  bool is_true() const noexcept;
  bool is_false() const noexcept;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Shorthands used throughout vcgen and the parsers.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator!(const Expr& a);
Expr operator&&(const Expr& a, const Expr& b);
Expr operator||(const Expr& a, const Expr& b);
Expr eq(const Expr& a, const Expr& b);
Expr ne(const Expr& a, const Expr& b);
Expr lt(const Expr& a, const Expr& b);
Expr le(const Expr& a, const Expr& b);
Expr gt(const Expr& a, const Expr& b);
Expr ge(const Expr& a, const Expr& b);
Expr implies(const Expr& a, const Expr& b);
Expr ite(const Expr& c, const Expr& a, const Expr& b);
Expr lit(long long v);

/// n-ary conjunction; empty -> true, singleton -> the element.
Expr and_of(std::vector<Expr> parts);
Expr or_of(std::vector<Expr> parts);

/// Free variables in first-occurrence order.
std::vector<std::string> free_vars(const Expr& e);
bool contains_nondet(const Expr& e);
bool contains_op(const Expr& e, Op op);

/// Simultaneous substitution of variables by expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacement);

/// Every integer constant occurring in `e`, added to `out`.
void collect_int_consts(const Expr& e, std::set<BigInt>& out);

/// Tree size, counting every node.
std::size_t expr_size(const Expr& e);

/// Sort environment for term conversion and declarations.
using SortMap = std::map<std::string, Sort>;

using Value = std::variant<BigInt, bool>;
using Env = std::map<std::string, Value>;

/// Ground evaluation with unbounded integers and SMT-LIB div/mod semantics.
/// Throws EvalError on unbound variables, nondeterminism, or division by 0.
Value evaluate(const Expr& e, const Env& env);
bool evaluate_bool(const Expr& e, const Env& env);
BigInt evaluate_int(const Expr& e, const Env& env);

/// SMT-LIB euclidean division/modulus (remainder always non-negative).
BigInt smt_div(const BigInt& a, const BigInt& b);
BigInt smt_mod(const BigInt& a, const BigInt& b);

std::string to_smt(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace invsynth
