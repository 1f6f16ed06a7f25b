#pragma once

#include "invsynth/expr.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace invsynth {

struct Stmt;
using Block = std::vector<Stmt>;

struct Assign {
  std::string var;
  Expr value;
};

struct Havoc {
  std::string var;
};

struct Assume {
  Expr cond;
};

struct Skip {};

struct IfElse {
  Expr cond;
  Block then_branch;
  Block else_branch;
};

/// Loop-free statement. The program's single loop lives in Program.
struct Stmt {
  std::variant<Assign, Havoc, Assume, Skip, IfElse> node;
};

bool operator==(const Assign& a, const Assign& b);
bool operator==(const Havoc& a, const Havoc& b);
bool operator==(const Assume& a, const Assume& b);
bool operator==(const Skip&, const Skip&);
bool operator==(const IfElse& a, const IfElse& b);
bool operator==(const Stmt& a, const Stmt& b);

/// A single-loop program:
///
///   assume(explicit_precondition); prefix; while (guard) { body } assert(postcondition);
///
/// All variables are integers with unbounded semantics.
struct Program {
  std::string name;
  std::vector<std::string> variables;
  Block prefix;
  Expr guard;
  Block body;
  Expr postcondition;
  std::optional<Expr> explicit_precondition;

  bool declares(std::string_view var) const;
  SortMap sorts() const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Parses the C subset: `int` declarations, then loop-free statements, one
/// `while`/`for` loop, then `assert`s (optionally `if (c) assert(q);`). An
/// optional `int main() { ... }` wrapper and `#` lines are tolerated.
/// Throws FrontendError.
Program parse_program(std::string_view source, std::string name = "program");

/// Parses a statement list over already-declared variables (used to read
/// back CFG node text).
Block parse_statements(std::string_view text, const std::vector<std::string>& variables);

/// Parses a boolean C expression over declared variables.
Expr parse_condition(std::string_view text, const std::vector<std::string>& variables);

/// C rendering. Fully parenthesized so that reparsing is exact.
std::string to_c(const Expr& e);
std::string to_c(const Stmt& s, int indent = 0);
std::string to_c(const Block& b, int indent = 0);

/// Source text that parses back to a structurally equal Program.
std::string print_program(const Program& p);

/// Variables assigned or havocked anywhere in `b`.
std::vector<std::string> modified_vars(const Block& b);

/// Integer constants in every expression of the program.
std::vector<BigInt> program_literals(const Program& p);

}  // namespace invsynth
