#include "invsynth/expr.hpp"

#include "invsynth/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <sstream>

namespace invsynth {

struct Expr::Node {
  Op op;
  Sort sort;
  BigInt int_value;
  bool bool_value = false;
  std::string name;
  std::vector<Expr> args;
};

namespace {

bool is_arith(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Mod:
      return true;
    default:
      return false;
  }
}

bool is_comparison(Op op) {
  switch (op) {
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      return true;
    default:
      return false;
  }
}

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Neg: return "-";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "div";
    case Op::Mod: return "mod";
    case Op::Eq: return "=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Not: return "not";
    case Op::Implies: return "=>";
    case Op::Ite: return "ite";
    default: return "?";
  }
}

[[noreturn]] void type_error(Op op, const std::string& what) {
  throw TypeError(std::string("ill-typed '") + op_symbol(op) + "': " + what);
}

void require_sort(Op op, const std::vector<Expr>& args, Sort sort) {
  for (const auto& a : args) {
    if (a.sort() != sort) type_error(op, std::string("expected ") + to_string(sort) + " operand");
  }
}

void require_arity(Op op, const std::vector<Expr>& args, std::size_t lo, std::size_t hi) {
  if (args.size() < lo || args.size() > hi) type_error(op, "wrong number of operands");
}

}  // namespace

const char* to_string(Sort sort) noexcept { return sort == Sort::Int ? "Int" : "Bool"; }

Expr::Expr() : Expr(bool_const(true)) {}

Expr Expr::int_const(BigInt value) {
  auto n = std::make_shared<Node>();
  n->op = Op::IntConst;
  n->sort = Sort::Int;
  n->int_value = std::move(value);
  return Expr(std::move(n));
}

Expr Expr::bool_const(bool value) {
  auto n = std::make_shared<Node>();
  n->op = Op::BoolConst;
  n->sort = Sort::Bool;
  n->bool_value = value;
  return Expr(std::move(n));
}

Expr Expr::var(std::string name, Sort sort) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->sort = sort;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::nondet(Sort sort) {
  auto n = std::make_shared<Node>();
  n->op = Op::Nondet;
  n->sort = sort;
  return Expr(std::move(n));
}

Expr Expr::make(Op op, std::vector<Expr> args) {
  Sort sort = Sort::Bool;
  if (op == Op::IntConst || op == Op::BoolConst || op == Op::Var || op == Op::Nondet) {
    throw std::logic_error("Expr::make called with a leaf operator");
  }
  if (is_arith(op)) {
    if (op == Op::Neg) require_arity(op, args, 1, 1);
    else if (op == Op::Div || op == Op::Mod) require_arity(op, args, 2, 2);
    else require_arity(op, args, 2, SIZE_MAX);
    require_sort(op, args, Sort::Int);
    sort = Sort::Int;
  } else if (is_comparison(op)) {
    require_arity(op, args, 2, 2);
    require_sort(op, args, Sort::Int);
  } else if (op == Op::Eq || op == Op::Ne) {
    require_arity(op, args, 2, 2);
    if (args[0].sort() != args[1].sort()) type_error(op, "operands of different sorts");
  } else if (op == Op::And || op == Op::Or) {
    require_arity(op, args, 2, SIZE_MAX);
    require_sort(op, args, Sort::Bool);
  } else if (op == Op::Not) {
    require_arity(op, args, 1, 1);
    require_sort(op, args, Sort::Bool);
  } else if (op == Op::Implies) {
    require_arity(op, args, 2, 2);
    require_sort(op, args, Sort::Bool);
  } else if (op == Op::Ite) {
    require_arity(op, args, 3, 3);
    if (args[0].sort() != Sort::Bool) type_error(op, "condition must be Bool");
    if (args[1].sort() != args[2].sort()) type_error(op, "branches of different sorts");
    sort = args[1].sort();
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->sort = sort;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }
Sort Expr::sort() const noexcept { return node_->sort; }

const BigInt& Expr::int_value() const {
  if (node_->op != Op::IntConst) throw std::logic_error("int_value() on non-constant");
  return node_->int_value;
}

bool Expr::bool_value() const {
  if (node_->op != Op::BoolConst) throw std::logic_error("bool_value() on non-constant");
  return node_->bool_value;
}

const std::string& Expr::name() const {
  if (node_->op != Op::Var) throw std::logic_error("name() on non-variable");
  return node_->name;
}

std::span<const Expr> Expr::args() const noexcept { return node_->args; }

const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }

bool Expr::is_true() const noexcept { return node_->op == Op::BoolConst && node_->bool_value; }
bool Expr::is_false() const noexcept { return node_->op == Op::BoolConst && !node_->bool_value; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op || x.sort != y.sort) return false;
  switch (x.op) {
    case Op::IntConst: return x.int_value == y.int_value;
    case Op::BoolConst: return x.bool_value == y.bool_value;
    case Op::Var: return x.name == y.name;
    case Op::Nondet: return true;
    default: return x.args == y.args;
  }
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Op::Add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Op::Sub, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Op::Mul, {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(Op::Neg, {a}); }
Expr operator!(const Expr& a) { return Expr::make(Op::Not, {a}); }
Expr operator&&(const Expr& a, const Expr& b) { return Expr::make(Op::And, {a, b}); }
Expr operator||(const Expr& a, const Expr& b) { return Expr::make(Op::Or, {a, b}); }
Expr eq(const Expr& a, const Expr& b) { return Expr::make(Op::Eq, {a, b}); }
Expr ne(const Expr& a, const Expr& b) { return Expr::make(Op::Ne, {a, b}); }
Expr lt(const Expr& a, const Expr& b) { return Expr::make(Op::Lt, {a, b}); }
Expr le(const Expr& a, const Expr& b) { return Expr::make(Op::Le, {a, b}); }
Expr gt(const Expr& a, const Expr& b) { return Expr::make(Op::Gt, {a, b}); }
Expr ge(const Expr& a, const Expr& b) { return Expr::make(Op::Ge, {a, b}); }
Expr implies(const Expr& a, const Expr& b) { return Expr::make(Op::Implies, {a, b}); }
Expr ite(const Expr& c, const Expr& a, const Expr& b) { return Expr::make(Op::Ite, {c, a, b}); }
Expr lit(long long v) { return Expr::int_const(BigInt(v)); }

Expr and_of(std::vector<Expr> parts) {
  std::erase_if(parts, [](const Expr& e) { return e.is_true(); });
  if (parts.empty()) return Expr::bool_const(true);
  if (parts.size() == 1) return parts.front();
  return Expr::make(Op::And, std::move(parts));
}

Expr or_of(std::vector<Expr> parts) {
  std::erase_if(parts, [](const Expr& e) { return e.is_false(); });
  if (parts.empty()) return Expr::bool_const(false);
  if (parts.size() == 1) return parts.front();
  return Expr::make(Op::Or, std::move(parts));
}

namespace {

void collect_vars(const Expr& e, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (e.op() == Op::Var) {
    if (seen.insert(e.name()).second) out.push_back(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_vars(a, out, seen);
}

}  // namespace

std::vector<std::string> free_vars(const Expr& e) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(e, out, seen);
  return out;
}

bool contains_op(const Expr& e, Op op) {
  if (e.op() == op) return true;
  return std::ranges::any_of(e.args(), [op](const Expr& a) { return contains_op(a, op); });
}

bool contains_nondet(const Expr& e) { return contains_op(e, Op::Nondet); }

Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacement) {
  switch (e.op()) {
    case Op::Var: {
      auto it = replacement.find(e.name());
      if (it == replacement.end()) return e;
      if (it->second.sort() != e.sort()) throw TypeError("substitution changes the sort of " + e.name());
      return it->second;
    }
    case Op::IntConst:
    case Op::BoolConst:
    case Op::Nondet:
      return e;
    default: {
      std::vector<Expr> args;
      args.reserve(e.args().size());
      bool changed = false;
      for (const auto& a : e.args()) {
        args.push_back(substitute(a, replacement));
        changed = changed || !(args.back() == a);
      }
      if (!changed) return e;
      return Expr::make(e.op(), std::move(args));
    }
  }
}

void collect_int_consts(const Expr& e, std::set<BigInt>& out) {
  if (e.op() == Op::IntConst) out.insert(e.int_value());
  for (const auto& a : e.args()) collect_int_consts(a, out);
}

std::size_t expr_size(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += expr_size(a);
  return n;
}

BigInt smt_div(const BigInt& a, const BigInt& b) {
  if (b == 0) throw EvalError("division by zero");
  // Truncating quotient, then adjust so that the remainder is non-negative.
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r < 0) {
    if (b > 0) q -= 1;
    else q += 1;
  }
  return q;
}

BigInt smt_mod(const BigInt& a, const BigInt& b) {
  BigInt q = smt_div(a, b);
  return a - q * b;
}

Value evaluate(const Expr& e, const Env& env) {
  auto ival = [&](std::size_t i) { return evaluate_int(e.arg(i), env); };
  auto bval = [&](std::size_t i) { return evaluate_bool(e.arg(i), env); };
  switch (e.op()) {
    case Op::IntConst: return e.int_value();
    case Op::BoolConst: return e.bool_value();
    case Op::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) throw EvalError("unbound variable " + e.name());
      if ((e.sort() == Sort::Int) != std::holds_alternative<BigInt>(it->second)) {
        throw EvalError("variable " + e.name() + " bound to a value of the wrong sort");
      }
      return it->second;
    }
    case Op::Nondet: throw EvalError("cannot evaluate a nondeterministic value");
    case Op::Neg: return BigInt(-ival(0));
    case Op::Add: {
      BigInt acc = 0;
      for (std::size_t i = 0; i < e.args().size(); ++i) acc += ival(i);
      return acc;
    }
    case Op::Sub: {
      BigInt acc = ival(0);
      for (std::size_t i = 1; i < e.args().size(); ++i) acc -= ival(i);
      return acc;
    }
    case Op::Mul: {
      BigInt acc = 1;
      for (std::size_t i = 0; i < e.args().size(); ++i) acc *= ival(i);
      return acc;
    }
    case Op::Div: return smt_div(ival(0), ival(1));
    case Op::Mod: return smt_mod(ival(0), ival(1));
    case Op::Eq:
    case Op::Ne: {
      bool same = e.arg(0).sort() == Sort::Int ? ival(0) == ival(1) : bval(0) == bval(1);
      return e.op() == Op::Eq ? same : !same;
    }
    case Op::Lt: return ival(0) < ival(1);
    case Op::Le: return ival(0) <= ival(1);
    case Op::Gt: return ival(0) > ival(1);
    case Op::Ge: return ival(0) >= ival(1);
    case Op::And:
      for (std::size_t i = 0; i < e.args().size(); ++i)
        if (!bval(i)) return false;
      return true;
    case Op::Or:
      for (std::size_t i = 0; i < e.args().size(); ++i)
        if (bval(i)) return true;
      return false;
    case Op::Not: return !bval(0);
    case Op::Implies: return !bval(0) || bval(1);
    case Op::Ite: return bval(0) ? evaluate(e.arg(1), env) : evaluate(e.arg(2), env);
  }
  throw std::logic_error("unhandled operator in evaluate");
}

bool evaluate_bool(const Expr& e, const Env& env) {
  auto v = evaluate(e, env);
  if (auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalError("expected a boolean value");
}

BigInt evaluate_int(const Expr& e, const Env& env) {
  auto v = evaluate(e, env);
  if (auto* i = std::get_if<BigInt>(&v)) return *i;
  throw EvalError("expected an integer value");
}

namespace {

void write_smt(std::ostream& os, const Expr& e) {
  switch (e.op()) {
    case Op::IntConst:
      if (e.int_value() < 0) os << "(- " << BigInt(-e.int_value()) << ")";
      else os << e.int_value();
      return;
    case Op::BoolConst: os << (e.bool_value() ? "true" : "false"); return;
    case Op::Var: os << e.name(); return;
    case Op::Nondet: throw std::logic_error("nondet has no SMT-LIB form");
    case Op::Ne:
      os << "(not (= ";
      write_smt(os, e.arg(0));
      os << ' ';
      write_smt(os, e.arg(1));
      os << "))";
      return;
    default:
      os << '(' << op_symbol(e.op());
      for (const auto& a : e.args()) {
        os << ' ';
        write_smt(os, a);
      }
      os << ')';
  }
}

}  // namespace

std::string to_smt(const Expr& e) {
  std::ostringstream os;
  write_smt(os, e);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  write_smt(os, e);
  return os;
}

}  // namespace invsynth
