#include "invsynth/program.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace invsynth {

bool operator==(const Assign& a, const Assign& b) { return a.var == b.var && a.value == b.value; }
bool operator==(const Havoc& a, const Havoc& b) { return a.var == b.var; }
bool operator==(const Assume& a, const Assume& b) { return a.cond == b.cond; }
bool operator==(const Skip&, const Skip&) { return true; }
bool operator==(const IfElse& a, const IfElse& b) {
  return a.cond == b.cond && a.then_branch == b.then_branch && a.else_branch == b.else_branch;
}
bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }

bool Program::declares(std::string_view var) const {
  return std::find(variables.begin(), variables.end(), var) != variables.end();
}

SortMap Program::sorts() const {
  SortMap m;
  for (const auto& v : variables) m[v] = Sort::Int;
  return m;
}

namespace {

const char* c_op(Op op) {
  switch (op) {
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    case Op::Mul: return " * ";
    case Op::Div: return " / ";
    case Op::Mod: return " % ";
    case Op::Eq: return " == ";
    case Op::Ne: return " != ";
    case Op::Lt: return " < ";
    case Op::Le: return " <= ";
    case Op::Gt: return " > ";
    case Op::Ge: return " >= ";
    case Op::And: return " && ";
    case Op::Or: return " || ";
    default: return " ? ";
  }
}

void write_c(std::ostream& os, const Expr& e) {
  switch (e.op()) {
    case Op::IntConst:
      if (e.int_value() < 0) os << "(-" << BigInt(-e.int_value()) << ")";
      else os << e.int_value();
      return;
    case Op::BoolConst: os << (e.bool_value() ? "true" : "false"); return;
    case Op::Var: os << e.name(); return;
    case Op::Nondet: os << "unknown()"; return;
    case Op::Neg:
      os << "(-";
      write_c(os, e.arg(0));
      os << ")";
      return;
    case Op::Not:
      os << "(!";
      write_c(os, e.arg(0));
      os << ")";
      return;
    case Op::Implies:
      os << "((!";
      write_c(os, e.arg(0));
      os << ") || ";
      write_c(os, e.arg(1));
      os << ")";
      return;
    case Op::Ite:
      os << "(";
      write_c(os, e.arg(0));
      os << " ? ";
      write_c(os, e.arg(1));
      os << " : ";
      write_c(os, e.arg(2));
      os << ")";
      return;
    default:
      os << "(";
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) os << c_op(e.op());
        write_c(os, e.arg(i));
      }
      os << ")";
  }
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

void write_block(std::ostream& os, const Block& b, int indent);

void write_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Assign>) {
          os << pad(indent) << n.var << " = " << to_c(n.value) << ";\n";
        } else if constexpr (std::is_same_v<T, Havoc>) {
          os << pad(indent) << n.var << " = unknown();\n";
        } else if constexpr (std::is_same_v<T, Assume>) {
          os << pad(indent) << "assume(" << to_c(n.cond) << ");\n";
        } else if constexpr (std::is_same_v<T, Skip>) {
          os << pad(indent) << ";\n";
        } else {
          os << pad(indent) << "if (" << to_c(n.cond) << ") {\n";
          write_block(os, n.then_branch, indent + 1);
          os << pad(indent) << "}";
          if (!n.else_branch.empty()) {
            os << " else {\n";
            write_block(os, n.else_branch, indent + 1);
            os << pad(indent) << "}";
          }
          os << "\n";
        }
      },
      s.node);
}

void write_block(std::ostream& os, const Block& b, int indent) {
  for (const auto& s : b) write_stmt(os, s, indent);
}

// A postcondition produced by the parser is a left-nested conjunction of
// assertions, some of which are `if (c) assert(q);` implications.
bool chain_has_implication(const Expr& e) {
  if (e.op() == Op::Implies) return true;
  return e.op() == Op::And && e.args().size() == 2 &&
         (chain_has_implication(e.arg(0)) || e.arg(1).op() == Op::Implies);
}

void write_post(std::ostream& os, const Expr& q) {
  if (q.is_true()) return;
  if (q.op() == Op::And && chain_has_implication(q)) {
    write_post(os, q.arg(0));
    write_post(os, q.arg(1));
  } else if (q.op() == Op::Implies) {
    os << "if (" << to_c(q.arg(0)) << ") assert(" << to_c(q.arg(1)) << ");\n";
  } else {
    os << "assert(" << to_c(q) << ");\n";
  }
}

void collect_modified(const Block& b, std::vector<std::string>& out) {
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& s : b) {
    if (auto* a = std::get_if<Assign>(&s.node)) add(a->var);
    else if (auto* h = std::get_if<Havoc>(&s.node)) add(h->var);
    else if (auto* i = std::get_if<IfElse>(&s.node)) {
      collect_modified(i->then_branch, out);
      collect_modified(i->else_branch, out);
    }
  }
}

void collect_block_consts(const Block& b, std::set<BigInt>& out) {
  for (const auto& s : b) {
    if (auto* a = std::get_if<Assign>(&s.node)) collect_int_consts(a->value, out);
    else if (auto* as = std::get_if<Assume>(&s.node)) collect_int_consts(as->cond, out);
    else if (auto* i = std::get_if<IfElse>(&s.node)) {
      collect_int_consts(i->cond, out);
      collect_block_consts(i->then_branch, out);
      collect_block_consts(i->else_branch, out);
    }
  }
}

}  // namespace

std::string to_c(const Expr& e) {
  std::ostringstream os;
  write_c(os, e);
  return os.str();
}

std::string to_c(const Stmt& s, int indent) {
  std::ostringstream os;
  write_stmt(os, s, indent);
  return os.str();
}

std::string to_c(const Block& b, int indent) {
  std::ostringstream os;
  write_block(os, b, indent);
  return os.str();
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& v : p.variables) os << "int " << v << ";\n";
  if (p.explicit_precondition) os << "assume(" << to_c(*p.explicit_precondition) << ");\n";
  write_block(os, p.prefix, 0);
  os << "while (" << to_c(p.guard) << ") {\n";
  write_block(os, p.body, 1);
  os << "}\n";
  write_post(os, p.postcondition);
  return os.str();
}

std::vector<std::string> modified_vars(const Block& b) {
  std::vector<std::string> out;
  collect_modified(b, out);
  return out;
}

std::vector<BigInt> program_literals(const Program& p) {
  std::set<BigInt> out;
  collect_block_consts(p.prefix, out);
  collect_block_consts(p.body, out);
  collect_int_consts(p.guard, out);
  collect_int_consts(p.postcondition, out);
  if (p.explicit_precondition) collect_int_consts(*p.explicit_precondition, out);
  return {out.begin(), out.end()};
}

}  // namespace invsynth
