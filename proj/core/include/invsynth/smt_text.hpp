#pragma once

#include "invsynth/expr.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace invsynth {

/// A node of SMT-LIB surface syntax: either an atom or a parenthesized list.
struct SExpr {
  enum class Kind { Atom, List };
  Kind kind = Kind::Atom;
  std::string atom;   // symbol text, numeral, or string literal (with quotes)
  bool quoted = false;  // atom came from |...|
  std::vector<SExpr> items;
  std::size_t offset = 0;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_symbol(std::string_view s) const { return is_atom() && !quoted && atom == s; }
};

/// Reads every top-level S-expression in `text`. Comments run from ';' to
/// end of line. Throws SExprError on unbalanced input.
std::vector<SExpr> read_sexprs(std::string_view text);

std::string to_string(const SExpr& s);

/// True when parentheses balance, ignoring comments, strings and |quoted|
/// symbols.
bool is_balanced(std::string_view text);

/// Converts an SMT-LIB term to an Expr. Supports the integer/boolean core:
/// numerals, true/false, + - * div mod abs, = distinct, chained < <= > >=,
/// and or not => xor ite, and `let`. Throws TypeError/SExprError.
Expr sexpr_to_expr(const SExpr& term, const SortMap& sorts);
Expr parse_smt_term(std::string_view text, const SortMap& sorts);

/// Renames whole symbols only. Never touches substrings of longer symbols,
/// string literals or comments; |quoted| symbols are matched on their
/// content. Works on arbitrary, possibly malformed text.
std::string rename_symbols(std::string_view text, const std::map<std::string, std::string>& renaming);

/// Numerals appearing as standalone tokens (outside comments and strings).
std::vector<BigInt> numerals_in(std::string_view text);

/// True for characters that may appear in an SMT-LIB simple symbol.
bool is_symbol_char(char c);

}  // namespace invsynth
