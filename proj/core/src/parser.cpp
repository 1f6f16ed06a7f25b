#include "invsynth/errors.hpp"
#include "invsynth/program.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace invsynth {

namespace {

using Kind = FrontendError::Kind;

struct Tok {
  enum class T { Ident, Number, Punct, End };
  T type = T::End;
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
};

std::vector<Tok> lex(std::string_view src) {
  static const char* const kPuncts[] = {"&&", "||", "==", "!=", "<=", ">=", "++", "--", "+=", "-=", "*=",
                                        "/=", "%=", "->", "<<", ">>", "(", ")", "{", "}", ";", ",", "=",
                                        "<", ">", "+", "-", "*", "/", "%", "!", "&", "|", "[", "]", "?",
                                        ":", "~", "^", ".", "\"", "'"};
  std::vector<Tok> out;
  std::size_t i = 0, line = 1, col = 1;
  bool at_line_start = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        at_line_start = true;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n' || std::isspace(static_cast<unsigned char>(c))) {
      bool nl = c == '\n';
      advance(1);
      if (nl) at_line_start = true;
      continue;
    }
    if (c == '#' && at_line_start) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    at_line_start = false;
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      std::size_t start_line = line, start_col = col;
      std::size_t end = src.find("*/", i + 2);
      if (end == std::string_view::npos) throw FrontendError(Kind::Syntax, "unterminated comment", start_line, start_col);
      advance(end + 2 - i);
      continue;
    }
    Tok t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Tok::T::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      t.type = Tok::T::Number;
      t.text = std::string(src.substr(i, j - i));
      if (!std::all_of(t.text.begin(), t.text.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        throw FrontendError(Kind::Unsupported, "only decimal integer literals are supported: " + t.text, t.line, t.col);
      }
      advance(j - i);
    } else {
      bool matched = false;
      for (const char* p : kPuncts) {
        std::string_view pv(p);
        if (src.substr(i, pv.size()) == pv) {
          t.type = Tok::T::Punct;
          t.text = std::string(pv);
          advance(pv.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw FrontendError(Kind::Syntax, std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Tok end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

bool is_nondet_call(const std::string& name) {
  if (name.rfind("unknown", 0) != 0) return false;
  return std::all_of(name.begin() + 7, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> kw = {"do",    "switch", "case",   "goto",  "break", "continue",
                                           "float", "double", "char",   "long",  "short", "unsigned",
                                           "signed", "struct", "union", "void",  "bool",  "_Bool"};
  return kw;
}

class Parser {
 public:
  Parser(std::string_view src, std::vector<std::string> predeclared) : toks_(lex(src)) {
    for (auto& v : predeclared) declare(v, Tok{});
  }

  Program parse_program(std::string name) {
    Program p;
    p.name = std::move(name);
    bool wrapped = false;
    if ((peek().text == "int" || peek().text == "void") && peek(1).text == "main" && peek(2).text == "(") {
      pos_ += 3;
      if (peek().text == "void") ++pos_;
      expect(")");
      expect("{");
      wrapped = true;
    }

    Block pre;
    // Declarations first; `int x = e;` also contributes an assignment.
    while (peek().text == "int") {
      ++pos_;
      while (true) {
        if (peek().text == "*") unsupported("pointers are not supported", peek());
        Tok id = expect_ident();
        if (peek().text == "[") unsupported("arrays are not supported", peek());
        declare(id.text, id);
        if (accept("=")) pre.push_back(assignment_rhs(id));
        if (accept(",")) continue;
        expect(";");
        break;
      }
    }

    while (!is_loop_start()) {
      if (peek().type == Tok::T::End || peek().text == "}") {
        throw FrontendError(Kind::Unsupported, "program has no loop", peek().line, peek().col);
      }
      if (peek().text == "int") {
        throw FrontendError(Kind::Syntax, "declarations must precede statements", peek().line, peek().col);
      }
      if (peek().text == "assert") unsupported("assert is only allowed after the loop", peek());
      statement(pre, Region::Prefix);
    }

    // Leading assumptions constrain the initial state directly.
    std::size_t lead = 0;
    while (lead < pre.size() && std::holds_alternative<Assume>(pre[lead].node)) {
      const Expr& c = std::get<Assume>(pre[lead].node).cond;
      p.explicit_precondition = p.explicit_precondition ? (*p.explicit_precondition && c) : c;
      ++lead;
    }
    p.prefix.assign(pre.begin() + static_cast<std::ptrdiff_t>(lead), pre.end());

    loop(p);

    std::optional<Expr> post;
    while (true) {
      const Tok& t = peek();
      if (t.type == Tok::T::End) break;
      if (wrapped && t.text == "}") break;
      if (t.text == "assert") {
        Expr q = assertion();
        post = post ? (*post && q) : q;
      } else if (t.text == "if") {
        ++pos_;
        expect("(");
        Expr c = condition();
        expect(")");
        std::optional<Expr> body;
        auto one = [&] {
          if (peek().text != "assert") unsupported("only assertions may follow the loop", peek());
          Expr q = assertion();
          body = body ? (*body && q) : q;
        };
        if (accept("{")) {
          while (!accept("}")) one();
        } else {
          one();
        }
        if (peek().text == "else") unsupported("else-branch after the loop", peek());
        if (body) {
          Expr q = implies(c, *body);
          post = post ? (*post && q) : q;
        }
      } else if (t.text == "return") {
        ++pos_;
        while (peek().text != ";" && peek().type != Tok::T::End) ++pos_;
        expect(";");
      } else if (t.text == ";") {
        ++pos_;
      } else if (t.text == "while" || t.text == "for" || t.text == "do") {
        unsupported("only one loop is supported", t);
      } else {
        unsupported("only assertions may follow the loop", t);
      }
    }
    if (wrapped) expect("}");
    if (peek().type != Tok::T::End) syntax("trailing input after program", peek());

    p.postcondition = post.value_or(Expr::bool_const(true));
    p.variables = declared_order_;
    return p;
  }

  Block parse_statement_list() {
    Block b;
    while (peek().type != Tok::T::End) statement(b, Region::Body);
    return b;
  }

  Expr parse_condition_only() {
    Expr c = condition();
    if (peek().type != Tok::T::End) syntax("trailing input after expression", peek());
    return c;
  }

 private:
  enum class Region { Prefix, Body };

  const Tok& peek(std::size_t k = 0) const {
    std::size_t idx = std::min(pos_ + k, toks_.size() - 1);
    return toks_[idx];
  }

  bool accept(std::string_view text) {
    if (peek().type != Tok::T::End && peek().text == text) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view text) {
    if (!accept(text)) {
      const Tok& t = peek();
      syntax("expected '" + std::string(text) + "' but found " + describe(t), t);
    }
  }

  Tok expect_ident() {
    const Tok& t = peek();
    if (t.type != Tok::T::Ident) syntax("expected identifier but found " + describe(t), t);
    ++pos_;
    return t;
  }

  static std::string describe(const Tok& t) {
    if (t.type == Tok::T::End) return "end of input";
    return "'" + t.text + "'";
  }

  [[noreturn]] static void syntax(const std::string& msg, const Tok& t) {
    throw FrontendError(Kind::Syntax, msg, t.line, t.col);
  }

  [[noreturn]] static void unsupported(const std::string& msg, const Tok& t) {
    throw FrontendError(Kind::Unsupported, msg, t.line, t.col);
  }

  void declare(const std::string& name, const Tok& where) {
    if (is_nondet_call(name) || name == "assert" || name == "assume" || name == "true" || name == "false") {
      syntax("reserved name '" + name + "'", where);
    }
    if (declared_.count(name)) syntax("variable '" + name + "' declared twice", where);
    declared_.insert(name);
    declared_order_.push_back(name);
  }

  bool is_loop_start() const { return peek().text == "while" || peek().text == "for"; }

  void statement(Block& out, Region region) {
    const Tok& t = peek();
    if (t.type == Tok::T::End) syntax("unexpected end of input", t);
    if (t.text == "{") {
      ++pos_;
      while (!accept("}")) statement(out, region);
      return;
    }
    if (t.text == ";") {
      ++pos_;
      out.push_back(Stmt{Skip{}});
      return;
    }
    if (t.text == "while" || t.text == "for" || t.text == "do") {
      unsupported(region == Region::Body ? "nested loops are not supported" : "only one loop is supported", t);
    }
    if (t.text == "if") {
      ++pos_;
      expect("(");
      Expr c = condition();
      expect(")");
      IfElse node{c, {}, {}};
      statement(node.then_branch, region);
      if (accept("else")) statement(node.else_branch, region);
      out.push_back(Stmt{std::move(node)});
      return;
    }
    if (t.text == "assume") {
      ++pos_;
      expect("(");
      Expr c = condition();
      expect(")");
      expect(";");
      out.push_back(Stmt{Assume{c}});
      return;
    }
    if (t.text == "assert") unsupported("assert is only allowed after the loop", t);
    if (t.text == "int") syntax("declarations must precede statements", t);
    if (t.text == "return") unsupported("return before the end of the program", t);
    if (t.type == Tok::T::Ident && unsupported_keywords().count(t.text)) {
      unsupported("'" + t.text + "' is not supported", t);
    }
    out.push_back(simple_statement());
    expect(";");
  }

  // Assignment-like statement, possibly wrapped in redundant parentheses as
  // in `(x = (x + 1));`. Does not consume the trailing ';'.
  Stmt simple_statement() {
    if (accept("(")) {
      Stmt s = simple_statement();
      expect(")");
      return s;
    }
    const Tok& t = peek();
    if (t.text == "++" || t.text == "--") {
      bool inc = t.text == "++";
      ++pos_;
      Tok id = expect_ident();
      Expr v = use_var(id);
      return Stmt{Assign{id.text, inc ? v + lit(1) : v - lit(1)}};
    }
    if (t.text == "*" || t.text == "&") unsupported("pointers are not supported", t);
    if (t.type != Tok::T::Ident) syntax("expected a statement but found " + describe(t), t);
    Tok id = expect_ident();
    if (peek().text == "(") {
      unsupported("call to function '" + id.text + "' is not supported", id);
    }
    if (peek().text == "[") unsupported("arrays are not supported", peek());
    if (peek().text == "." || peek().text == "->") unsupported("structures and pointers are not supported", peek());
    Expr v = use_var(id);
    const Tok& op = peek();
    if (op.text == "++" || op.text == "--") {
      ++pos_;
      return Stmt{Assign{id.text, op.text == "++" ? v + lit(1) : v - lit(1)}};
    }
    if (op.text == "=") {
      ++pos_;
      return assignment_rhs(id);
    }
    if (op.text == "+=" || op.text == "-=" || op.text == "*=") {
      ++pos_;
      Expr rhs = as_int(expression(), op);
      Op o = op.text == "+=" ? Op::Add : op.text == "-=" ? Op::Sub : Op::Mul;
      return Stmt{Assign{id.text, Expr::make(o, {v, rhs})}};
    }
    if (op.text == "/=" || op.text == "%=") unsupported("division and modulo are not supported", op);
    syntax("expected an assignment but found " + describe(op), op);
  }

  // After `x =` has been consumed.
  Stmt assignment_rhs(const Tok& target) {
    const Tok& start = peek();
    Expr rhs = expression();
    if (rhs.op() == Op::Nondet) return Stmt{Havoc{target.text}};
    return Stmt{Assign{target.text, as_int(rhs, start)}};
  }

  void loop(Program& p) {
    const Tok& t = peek();
    Block body;
    if (t.text == "while") {
      ++pos_;
      expect("(");
      p.guard = condition();
      expect(")");
      statement(body, Region::Body);
    } else {
      ++pos_;
      expect("(");
      if (peek().text == "int") unsupported("declarations inside for-loop headers are not supported", peek());
      Block init;
      if (peek().text != ";") {
        init.push_back(simple_statement());
        while (accept(",")) init.push_back(simple_statement());
      }
      expect(";");
      p.guard = peek().text == ";" ? Expr::bool_const(true) : condition();
      expect(";");
      Block update;
      if (peek().text != ")") {
        update.push_back(simple_statement());
        while (accept(",")) update.push_back(simple_statement());
      }
      expect(")");
      statement(body, Region::Body);
      body.insert(body.end(), update.begin(), update.end());
      p.prefix.insert(p.prefix.end(), init.begin(), init.end());
    }
    p.body = std::move(body);
  }

  Expr assertion() {
    expect("assert");
    expect("(");
    Expr q = condition();
    expect(")");
    expect(";");
    return q;
  }

  Expr use_var(const Tok& id) {
    if (!declared_.count(id.text)) throw FrontendError(Kind::Undeclared, "'" + id.text + "' is not declared", id.line, id.col);
    return Expr::var(id.text);
  }

  // Nondet placeholders are parsed as Int and re-sorted by context.
  // Integer conditions follow C: nonzero is true.
  static Expr as_bool(const Expr& e, const Tok&) {
    if (e.op() == Op::Nondet) return Expr::nondet(Sort::Bool);
    if (e.sort() == Sort::Bool) return e;
    if (e.op() == Op::IntConst) return Expr::bool_const(e.int_value() != 0);
    return Expr::make(Op::Ne, {e, Expr::int_const(0)});
  }

  static Expr as_int(const Expr& e, const Tok& where) {
    if (e.op() == Op::Nondet) return Expr::nondet(Sort::Int);
    if (e.sort() != Sort::Int) unsupported("boolean expression used as an integer", where);
    return e;
  }

  Expr condition() {
    const Tok& start = peek();
    return as_bool(expression(), start);
  }

  Expr expression() { return logical_or(); }

  Expr logical_or() {
    Expr lhs = logical_and();
    while (peek().text == "||") {
      Tok op = peek();
      ++pos_;
      Expr rhs = logical_and();
      lhs = as_bool(lhs, op) || as_bool(rhs, op);
    }
    return lhs;
  }

  Expr logical_and() {
    Expr lhs = equality();
    while (peek().text == "&&") {
      Tok op = peek();
      ++pos_;
      Expr rhs = equality();
      lhs = as_bool(lhs, op) && as_bool(rhs, op);
    }
    return lhs;
  }

  Expr equality() {
    Expr lhs = relational();
    while (peek().text == "==" || peek().text == "!=") {
      Tok op = peek();
      ++pos_;
      Expr rhs = relational();
      bool boolean = (lhs.op() != Op::Nondet && lhs.sort() == Sort::Bool) ||
                     (rhs.op() != Op::Nondet && rhs.sort() == Sort::Bool);
      Expr a = boolean ? as_bool(lhs, op) : as_int(lhs, op);
      Expr b = boolean ? as_bool(rhs, op) : as_int(rhs, op);
      lhs = op.text == "==" ? eq(a, b) : ne(a, b);
    }
    return lhs;
  }

  Expr relational() {
    Expr lhs = additive();
    while (peek().text == "<" || peek().text == "<=" || peek().text == ">" || peek().text == ">=") {
      Tok op = peek();
      ++pos_;
      Expr rhs = additive();
      Expr a = as_int(lhs, op), b = as_int(rhs, op);
      if (op.text == "<") lhs = lt(a, b);
      else if (op.text == "<=") lhs = le(a, b);
      else if (op.text == ">") lhs = gt(a, b);
      else lhs = ge(a, b);
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (peek().text == "+" || peek().text == "-") {
      Tok op = peek();
      ++pos_;
      Expr rhs = multiplicative();
      lhs = op.text == "+" ? as_int(lhs, op) + as_int(rhs, op) : as_int(lhs, op) - as_int(rhs, op);
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (true) {
      const Tok& op = peek();
      if (op.text == "/" || op.text == "%") unsupported("division and modulo are not supported in programs", op);
      if (op.text != "*") break;
      Tok o = op;
      ++pos_;
      Expr rhs = unary();
      lhs = as_int(lhs, o) * as_int(rhs, o);
    }
    return lhs;
  }

  Expr unary() {
    const Tok& t = peek();
    if (t.text == "!") {
      Tok o = t;
      ++pos_;
      return !as_bool(unary(), o);
    }
    if (t.text == "-") {
      Tok o = t;
      ++pos_;
      Expr e = as_int(unary(), o);
      if (e.op() == Op::IntConst) return Expr::int_const(-e.int_value());
      return -e;
    }
    if (t.text == "+") {
      Tok o = t;
      ++pos_;
      return as_int(unary(), o);
    }
    if (t.text == "*" || t.text == "&") unsupported("pointers are not supported", t);
    if (t.text == "++" || t.text == "--") unsupported("increment inside an expression", t);
    return primary();
  }

  Expr primary() {
    Tok t = peek();
    if (t.type == Tok::T::Number) {
      ++pos_;
      return Expr::int_const(BigInt(t.text));
    }
    if (t.text == "(") {
      ++pos_;
      Expr e = expression();
      expect(")");
      return e;
    }
    if (t.type == Tok::T::Ident) {
      ++pos_;
      if (peek().text == "(") {
        if (is_nondet_call(t.text)) {
          ++pos_;
          expect(")");
          return Expr::nondet(Sort::Int);
        }
        unsupported("call to function '" + t.text + "' is not supported", t);
      }
      if (peek().text == "[") unsupported("arrays are not supported", peek());
      if (peek().text == "." || peek().text == "->") unsupported("structures and pointers are not supported", peek());
      if (peek().text == "++" || peek().text == "--") unsupported("increment inside an expression", peek());
      if (!declared_.count(t.text)) {
        if (t.text == "true") return Expr::bool_const(true);
        if (t.text == "false") return Expr::bool_const(false);
      }
      return use_var(t);
    }
    if (t.text == "?") unsupported("conditional expressions are not supported", t);
    syntax("expected an expression but found " + describe(t), t);
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> declared_;
  std::vector<std::string> declared_order_;
};

}  // namespace

Program parse_program(std::string_view source, std::string name) {
  Parser parser(source, {});
  return parser.parse_program(std::move(name));
}

Block parse_statements(std::string_view text, const std::vector<std::string>& variables) {
  Parser parser(text, variables);
  return parser.parse_statement_list();
}

Expr parse_condition(std::string_view text, const std::vector<std::string>& variables) {
  Parser parser(text, variables);
  return parser.parse_condition_only();
}

}  // namespace invsynth
