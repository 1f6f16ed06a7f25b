#include "invsynth/smt_text.hpp"

#include "invsynth/errors.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace invsynth {

bool is_symbol_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&': case '*':
    case '_': case '-': case '+': case '=': case '<': case '>': case '.': case '?':
    case '/': case '\'':
      return true;
    default:
      return false;
  }
}

namespace {

struct Token {
  enum class Kind { Open, Close, Atom, QuotedAtom, String, End };
  Kind kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    if (pos_ >= text_.size()) return {Token::Kind::End, "", pos_};
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      return {Token::Kind::Open, "(", start};
    }
    if (c == ')') {
      ++pos_;
      return {Token::Kind::Close, ")", start};
    }
    if (c == '"') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) throw SExprError("unterminated string literal", start);
        if (text_[pos_] == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        ++pos_;
      }
      return {Token::Kind::String, std::string(text_.substr(start, pos_ - start)), start};
    }
    if (c == '|') {
      std::size_t end = text_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw SExprError("unterminated quoted symbol", start);
      pos_ = end + 1;
      return {Token::Kind::QuotedAtom, std::string(text_.substr(start + 1, end - start - 1)), start};
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"' || d == '|' || d == ';') break;
      ++pos_;
    }
    return {Token::Kind::Atom, std::string(text_.substr(start, pos_ - start)), start};
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_numeral(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  Lexer lexer(text);
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  while (true) {
    Token t = lexer.next();
    switch (t.kind) {
      case Token::Kind::End:
        if (!stack.empty()) throw SExprError("unbalanced parentheses: missing ')'", stack.back().offset);
        return top;
      case Token::Kind::Open: {
        SExpr list;
        list.kind = SExpr::Kind::List;
        list.offset = t.offset;
        stack.push_back(std::move(list));
        break;
      }
      case Token::Kind::Close: {
        if (stack.empty()) throw SExprError("unbalanced parentheses: unexpected ')'", t.offset);
        SExpr done = std::move(stack.back());
        stack.pop_back();
        if (stack.empty()) top.push_back(std::move(done));
        else stack.back().items.push_back(std::move(done));
        break;
      }
      default: {
        SExpr atom;
        atom.atom = std::move(t.text);
        atom.quoted = t.kind == Token::Kind::QuotedAtom;
        atom.offset = t.offset;
        if (stack.empty()) top.push_back(std::move(atom));
        else stack.back().items.push_back(std::move(atom));
      }
    }
  }
}

std::string to_string(const SExpr& s) {
  if (s.is_atom()) return s.quoted ? "|" + s.atom + "|" : s.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    out += to_string(s.items[i]);
  }
  return out + ")";
}

bool is_balanced(std::string_view text) {
  try {
    read_sexprs(text);
    return true;
  } catch (const SExprError&) {
    return false;
  }
}

namespace {

class TermConverter {
 public:
  explicit TermConverter(const SortMap& sorts) : sorts_(sorts) {}

  Expr convert(const SExpr& s) {
    if (s.is_atom()) return atom(s);
    if (s.items.empty()) throw TypeError("empty application ()");
    const SExpr& head = s.items.front();
    if (!head.is_atom()) throw TypeError("unsupported higher-order application " + to_string(s));
    const std::string& f = head.atom;
    if (f == "let" && !head.quoted) return let(s);

    std::vector<Expr> args;
    for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(convert(s.items[i]));

    if (f == "-") {
      if (args.size() == 1) {
        if (args[0].op() == Op::IntConst) return Expr::int_const(-args[0].int_value());
        return Expr::make(Op::Neg, std::move(args));
      }
      return Expr::make(Op::Sub, std::move(args));
    }
    if (f == "+" || f == "*") {
      if (args.size() == 1) {
        if (args[0].sort() != Sort::Int) throw TypeError("'" + f + "' applied to a Bool");
        return args[0];
      }
      return Expr::make(f == "+" ? Op::Add : Op::Mul, std::move(args));
    }
    if (f == "div") return Expr::make(Op::Div, std::move(args));
    if (f == "mod") return Expr::make(Op::Mod, std::move(args));
    if (f == "abs") {
      if (args.size() != 1) throw TypeError("abs takes one argument");
      return ite(ge(args[0], lit(0)), args[0], -args[0]);
    }
    if (f == "not") return Expr::make(Op::Not, std::move(args));
    if (f == "and") return args.empty() ? Expr::bool_const(true) : args.size() == 1 ? args[0] : Expr::make(Op::And, std::move(args));
    if (f == "or") return args.empty() ? Expr::bool_const(false) : args.size() == 1 ? args[0] : Expr::make(Op::Or, std::move(args));
    if (f == "=>") {
      if (args.size() < 2) throw TypeError("'=>' needs at least two arguments");
      Expr acc = args.back();
      for (std::size_t i = args.size() - 1; i-- > 0;) acc = implies(args[i], acc);
      return acc;
    }
    if (f == "xor") {
      if (args.size() < 2) throw TypeError("'xor' needs at least two arguments");
      Expr acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = ne(acc, args[i]);
      return acc;
    }
    if (f == "ite") return Expr::make(Op::Ite, std::move(args));
    if (f == "distinct") {
      if (args.size() < 2) throw TypeError("'distinct' needs at least two arguments");
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < args.size(); ++i)
        for (std::size_t j = i + 1; j < args.size(); ++j) parts.push_back(ne(args[i], args[j]));
      return and_of(std::move(parts));
    }
    Op cmp;
    if (f == "=") cmp = Op::Eq;
    else if (f == "<") cmp = Op::Lt;
    else if (f == "<=") cmp = Op::Le;
    else if (f == ">") cmp = Op::Gt;
    else if (f == ">=") cmp = Op::Ge;
    else throw TypeError("unknown function symbol '" + f + "'");
    if (args.size() < 2) throw TypeError("'" + f + "' needs at least two arguments");
    std::vector<Expr> chain;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) chain.push_back(Expr::make(cmp, {args[i], args[i + 1]}));
    return and_of(std::move(chain));
  }

 private:
  Expr atom(const SExpr& s) {
    if (!s.quoted) {
      if (s.atom == "true") return Expr::bool_const(true);
      if (s.atom == "false") return Expr::bool_const(false);
      if (is_numeral(s.atom)) return Expr::int_const(BigInt(s.atom));
      if (!s.atom.empty() && s.atom.front() == '"') throw TypeError("string literals are not supported");
    }
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(s.atom);
      if (found != it->end()) return found->second;
    }
    auto sort = sorts_.find(s.atom);
    if (sort == sorts_.end()) throw TypeError("unknown constant '" + s.atom + "'");
    return Expr::var(s.atom, sort->second);
  }

  Expr let(const SExpr& s) {
    if (s.items.size() != 3 || !s.items[1].is_list()) throw TypeError("malformed let");
    std::map<std::string, Expr> bindings;
    for (const auto& b : s.items[1].items) {
      if (!b.is_list() || b.items.size() != 2 || !b.items[0].is_atom()) throw TypeError("malformed let binding");
      bindings[b.items[0].atom] = convert(b.items[1]);
    }
    scopes_.push_back(std::move(bindings));
    Expr body = convert(s.items[2]);
    scopes_.pop_back();
    return body;
  }

  const SortMap& sorts_;
  std::vector<std::map<std::string, Expr>> scopes_;
};

}  // namespace

Expr sexpr_to_expr(const SExpr& term, const SortMap& sorts) {
  TermConverter conv(sorts);
  return conv.convert(term);
}

Expr parse_smt_term(std::string_view text, const SortMap& sorts) {
  auto terms = read_sexprs(text);
  if (terms.size() != 1) throw SExprError("expected exactly one term, found " + std::to_string(terms.size()), 0);
  return sexpr_to_expr(terms.front(), sorts);
}

namespace {

// Walks `text` and reports every symbol token that lies outside comments
// and string literals. Tolerates unbalanced parentheses and unterminated
// quotes (the remainder is treated as opaque).
void scan_symbols(std::string_view text,
                  const std::function<void(std::size_t begin, std::size_t end, bool quoted)>& on_symbol) {
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '"') {
      ++i;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
    } else if (c == '|') {
      std::size_t end = text.find('|', i + 1);
      if (end == std::string_view::npos) return;
      on_symbol(i + 1, end, true);
      i = end + 1;
    } else if (is_symbol_char(c)) {
      std::size_t start = i;
      while (i < text.size() && is_symbol_char(text[i])) ++i;
      on_symbol(start, i, false);
    } else {
      ++i;
    }
  }
}

}  // namespace

std::string rename_symbols(std::string_view text, const std::map<std::string, std::string>& renaming) {
  std::string out;
  out.reserve(text.size() + 16);
  std::size_t copied = 0;
  scan_symbols(text, [&](std::size_t begin, std::size_t end, bool) {
    auto it = renaming.find(std::string(text.substr(begin, end - begin)));
    if (it == renaming.end()) return;
    out.append(text.substr(copied, begin - copied));
    out.append(it->second);
    copied = end;
  });
  out.append(text.substr(copied));
  return out;
}

std::vector<BigInt> numerals_in(std::string_view text) {
  std::vector<BigInt> out;
  scan_symbols(text, [&](std::size_t begin, std::size_t end, bool quoted) {
    auto tok = text.substr(begin, end - begin);
    if (!quoted && is_numeral(tok)) out.emplace_back(std::string(tok));
  });
  return out;
}

}  // namespace invsynth
