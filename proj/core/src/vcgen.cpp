#include "invsynth/vcgen.hpp"

#include "invsynth/errors.hpp"
#include "invsynth/smt_text.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace invsynth {

std::string primed_name(std::string_view var) { return std::string(var) + ".post"; }

const char* to_string(Obligation o) noexcept {
  switch (o) {
    case Obligation::Init: return "init";
    case Obligation::Inductive: return "inductive";
    case Obligation::Post: return "post";
  }
  return "?";
}

Obligation obligation_from_string(std::string_view s) {
  for (auto o : kObligations)
    if (s == to_string(o)) return o;
  throw Error("unknown obligation '" + std::string(s) + "'");
}

Invariant Invariant::from_text(std::string text, const SortMap& sorts) {
  Invariant inv;
  inv.smt_text = std::move(text);
  try {
    Expr e = parse_smt_term(inv.smt_text, sorts);
    if (e.sort() == Sort::Bool) inv.formula = std::move(e);
  } catch (const Error&) {
  }
  return inv;
}

Invariant Invariant::from_expr(const Expr& e) {
  if (e.sort() != Sort::Bool) throw TypeError("an invariant must be boolean");
  return {to_smt(e), e};
}

const std::string& SmtTemplate::script(Obligation o) const {
  switch (o) {
    case Obligation::Init: return init_script;
    case Obligation::Inductive: return inductive_script;
    case Obligation::Post: return post_script;
  }
  throw std::logic_error("bad obligation");
}

SortMap SmtTemplate::sorts() const {
  SortMap m;
  for (const auto& v : variables) m[v] = Sort::Int;
  return m;
}

const std::string& VcBundle::script(Obligation o) const {
  switch (o) {
    case Obligation::Init: return init_script;
    case Obligation::Inductive: return inductive_script;
    case Obligation::Post: return post_script;
  }
  throw std::logic_error("bad obligation");
}

namespace {

bool is_aux_name(const std::string& name) { return name.find('.') != std::string::npos; }

// Forward symbolic execution of loop-free code. Variable values are
// expressions over the initial state and fresh auxiliaries; assumptions are
// collected as path-guarded constraints.
class SymbolicState {
 public:
  SymbolicState(std::map<std::string, Expr> values, int* counter, std::vector<AuxVar>* aux)
      : values_(std::move(values)), counter_(counter), aux_(aux) {}

  Expr fresh(Sort sort, const std::string& base) {
    std::string name = base + "." + std::to_string(++*counter_);
    aux_->push_back({name, sort});
    return Expr::var(name, sort);
  }

  // Current-state view of `e`, with every nondeterministic marker replaced
  // by its own fresh auxiliary.
  Expr resolve(const Expr& e) {
    Expr r = replace_nondet(e);
    return substitute(r, values_);
  }

  void exec(const Block& b) {
    for (const auto& s : b) exec(s);
  }

  void exec(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign>) {
            set(n.var, resolve(n.value));
          } else if constexpr (std::is_same_v<T, Havoc>) {
            set(n.var, fresh(Sort::Int, n.var + ".h"));
          } else if constexpr (std::is_same_v<T, Assume>) {
            constraints_.push_back(resolve(n.cond));
          } else if constexpr (std::is_same_v<T, Skip>) {
          } else {
            Expr c = resolve(n.cond);
            SymbolicState then_state(values_, counter_, aux_);
            then_state.order_ = order_;
            then_state.exec(n.then_branch);
            SymbolicState else_state(values_, counter_, aux_);
            else_state.order_ = order_;
            else_state.exec(n.else_branch);
            merge(c, then_state, else_state);
          }
        },
        s.node);
  }

  const std::map<std::string, Expr>& values() const { return values_; }
  const std::vector<Expr>& constraints() const { return constraints_; }
  const std::vector<std::string>& assignment_order() const { return order_; }

 private:
  Expr replace_nondet(const Expr& e) {
    if (e.op() == Op::Nondet) return fresh(e.sort(), e.sort() == Sort::Int ? "nd" : "nb");
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : e.args()) {
      args.push_back(replace_nondet(a));
      changed = changed || !(args.back() == a);
    }
    return changed ? Expr::make(e.op(), std::move(args)) : e;
  }

  void set(const std::string& var, Expr value) {
    values_[var] = std::move(value);
    if (std::find(order_.begin(), order_.end(), var) == order_.end()) order_.push_back(var);
  }

  void merge(const Expr& c, const SymbolicState& t, const SymbolicState& e) {
    for (const auto& v : t.order_) add_order(v);
    for (const auto& v : e.order_) add_order(v);
    for (auto& [var, value] : values_) {
      const Expr& tv = t.values_.at(var);
      const Expr& ev = e.values_.at(var);
      if (tv == ev) value = tv;
      else value = ite(c, tv, ev);
    }
    if (!t.constraints_.empty()) constraints_.push_back(implies(c, and_of(t.constraints_)));
    if (!e.constraints_.empty()) constraints_.push_back(implies(!c, and_of(e.constraints_)));
  }

  void add_order(const std::string& v) {
    if (std::find(order_.begin(), order_.end(), v) == order_.end()) order_.push_back(v);
  }

  std::map<std::string, Expr> values_;
  std::vector<Expr> constraints_;
  std::vector<std::string> order_;
  int* counter_;
  std::vector<AuxVar>* aux_;
};

// ∃a. (v = a ∧ rest) ≡ rest[a := v] for an auxiliary a.
std::vector<Expr> eliminate_aux_definitions(std::vector<Expr> conjuncts) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
      const Expr& c = conjuncts[i];
      if (c.op() != Op::Eq) continue;
      const Expr& lhs = c.arg(0);
      const Expr& rhs = c.arg(1);
      if (lhs.op() != Op::Var || rhs.op() != Op::Var || is_aux_name(lhs.name()) || !is_aux_name(rhs.name())) continue;
      std::map<std::string, Expr> sub{{rhs.name(), lhs}};
      std::vector<Expr> rest;
      for (std::size_t j = 0; j < conjuncts.size(); ++j)
        if (j != i) rest.push_back(substitute(conjuncts[j], sub));
      conjuncts = std::move(rest);
      progress = true;
      break;
    }
  }
  std::erase_if(conjuncts, [](const Expr& e) {
    return e.is_true() || (e.op() == Op::Eq && e.arg(0) == e.arg(1));
  });
  return conjuncts;
}

struct PreconditionResult {
  Expr formula;
  std::vector<AuxVar> aux;
};

PreconditionResult compute_precondition(const Program& p, int* counter) {
  std::vector<AuxVar> aux;
  auto modified = modified_vars(p.prefix);
  std::map<std::string, Expr> initial;
  for (const auto& v : p.variables) {
    bool changed = std::find(modified.begin(), modified.end(), v) != modified.end();
    if (changed) {
      initial.emplace(v, Expr::var(v + ".init"));
      aux.push_back({v + ".init", Sort::Int});
    } else {
      initial.emplace(v, Expr::var(v));
    }
  }
  SymbolicState state(initial, counter, &aux);
  std::vector<Expr> conjuncts;
  std::vector<Expr> assumptions;
  if (p.explicit_precondition) assumptions.push_back(state.resolve(*p.explicit_precondition));
  state.exec(p.prefix);
  for (const auto& v : state.assignment_order()) conjuncts.push_back(eq(Expr::var(v), state.values().at(v)));
  assumptions.insert(assumptions.end(), state.constraints().begin(), state.constraints().end());
  conjuncts.insert(conjuncts.end(), assumptions.begin(), assumptions.end());
  Expr formula = and_of(eliminate_aux_definitions(std::move(conjuncts)));

  auto used = free_vars(formula);
  std::vector<AuxVar> remaining;
  for (const auto& a : aux)
    if (std::find(used.begin(), used.end(), a.name) != used.end()) remaining.push_back(a);
  return {formula, remaining};
}

void declare(std::ostream& os, const std::string& name, Sort sort) {
  os << "(declare-const " << name << ' ' << to_string(sort) << ")\n";
}

std::string header_for(const std::vector<std::string>& vars) {
  std::ostringstream os;
  os << "(set-option :produce-models true)\n(set-logic ALL)\n";
  for (const auto& v : vars) declare(os, v, Sort::Int);
  return os.str();
}

const char* kFooter = "(check-sat)\n(get-model)\n";

// Replaces every occurrence of `token` in `text` in a single left-to-right
// pass, so replacement text is never rescanned.
std::string replace_all(std::string_view text, std::string_view token, std::string_view with) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = text.find(token, pos);
    if (hit == std::string_view::npos) break;
    out.append(text.substr(pos, hit - pos));
    out.append(with);
    pos = hit + token.size();
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace

Expr derive_precondition(const Program& program) {
  int counter = 0;
  return compute_precondition(program, &counter).formula;
}

std::vector<AuxVar> precondition_aux(const Program& program, const Expr& precondition) {
  int counter = 0;
  auto r = compute_precondition(program, &counter);
  auto used = free_vars(precondition);
  std::vector<AuxVar> out;
  for (const auto& a : r.aux)
    if (std::find(used.begin(), used.end(), a.name) != used.end()) out.push_back(a);
  return out;
}

TransitionRelation encode_body(const Block& body, const std::vector<std::string>& vars) {
  int counter = 0;
  TransitionRelation tr;
  std::map<std::string, Expr> identity;
  for (const auto& v : vars) identity.emplace(v, Expr::var(v));
  SymbolicState state(identity, &counter, &tr.aux_vars);
  state.exec(body);
  std::vector<Expr> parts;
  for (const auto& v : vars) {
    tr.pre_state_vars.push_back(v);
    tr.post_state_vars.push_back(primed_name(v));
    parts.push_back(eq(Expr::var(primed_name(v)), state.values().at(v)));
  }
  parts.insert(parts.end(), state.constraints().begin(), state.constraints().end());
  tr.formula = and_of(std::move(parts));
  return tr;
}

SmtTemplate make_template(const Program& program) {
  SmtTemplate t;
  t.name = program.name;
  t.variables = program.variables;
  for (const auto& v : program.variables) t.primed[v] = primed_name(v);
  t.header = header_for(program.variables);

  int counter = 0;
  auto pre = compute_precondition(program, &counter);

  // Nondeterminism in the guard becomes fresh boolean/integer auxiliaries;
  // the same names are used in both scripts that mention B.
  std::vector<AuxVar> guard_aux;
  std::map<std::string, Expr> identity;
  for (const auto& v : program.variables) identity.emplace(v, Expr::var(v));
  SymbolicState guard_state(identity, &counter, &guard_aux);
  Expr guard = guard_state.resolve(program.guard);

  TransitionRelation tr = encode_body(program.body, program.variables);
  // Keep body auxiliaries distinct from guard auxiliaries.
  std::map<std::string, Expr> rename;
  for (auto& a : tr.aux_vars) {
    std::string fresh = "t." + a.name;
    rename.emplace(a.name, Expr::var(fresh, a.sort));
    a.name = fresh;
  }
  Expr transition = substitute(tr.formula, rename);

  std::ostringstream init;
  init << "; obligation: init (P => I)\n" << t.header;
  for (const auto& a : pre.aux) declare(init, a.name, a.sort);
  init << "(assert (not (=> " << to_smt(pre.formula) << ' ' << kInvPlaceholder << ")))\n" << kFooter;
  t.init_script = init.str();

  std::ostringstream ind;
  ind << "; obligation: inductive (I && B && T => I')\n" << t.header;
  for (const auto& v : program.variables) declare(ind, primed_name(v), Sort::Int);
  for (const auto& a : guard_aux) declare(ind, a.name, a.sort);
  for (const auto& a : tr.aux_vars) declare(ind, a.name, a.sort);
  ind << "(assert (not (=> (and " << kInvPlaceholder << ' ' << to_smt(guard) << ' ' << to_smt(transition) << ") "
      << kInvPrimedPlaceholder << ")))\n"
      << kFooter;
  t.inductive_script = ind.str();

  std::ostringstream post;
  post << "; obligation: post (I && !B => Q)\n" << t.header;
  for (const auto& a : guard_aux) declare(post, a.name, a.sort);
  post << "(assert (not (=> (and " << kInvPlaceholder << " (not " << to_smt(guard) << ")) "
       << to_smt(program.postcondition) << ")))\n"
       << kFooter;
  t.post_script = post.str();
  return t;
}

std::string prime_candidate(const SmtTemplate& tmpl, std::string_view candidate_text) {
  return rename_symbols(candidate_text, tmpl.primed);
}

VcBundle splice(const SmtTemplate& tmpl, const Invariant& candidate) {
  std::string primed = prime_candidate(tmpl, candidate.smt_text);
  auto fill = [&](const std::string& script) {
    std::string with_primed = replace_all(script, kInvPrimedPlaceholder, "\x01");
    std::string out = replace_all(with_primed, kInvPlaceholder, candidate.smt_text);
    return replace_all(out, "\x01", primed);
  };
  return {fill(tmpl.init_script), fill(tmpl.inductive_script), fill(tmpl.post_script), candidate};
}

namespace {

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

SmtTemplate parse_template_file(std::string_view text, std::string name) {
  SmtTemplate t;
  t.name = std::move(name);
  std::optional<std::vector<std::string>> primed;
  std::string* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view lv(line);
    if (lv.rfind(";; @", 0) == 0) {
      auto words = split_words(lv.substr(4));
      if (words.empty()) throw Error("template line " + std::to_string(lineno) + ": empty directive");
      const std::string& d = words.front();
      std::vector<std::string> rest(words.begin() + 1, words.end());
      if (d == "vars") {
        t.variables = rest;
      } else if (d == "primed") {
        primed = rest;
      } else if (d == "name") {
        if (!rest.empty()) t.name = rest.front();
      } else if (d == "script") {
        if (rest.size() != 1) throw Error("template line " + std::to_string(lineno) + ": '@script' needs one argument");
        switch (obligation_from_string(rest.front())) {
          case Obligation::Init: current = &t.init_script; break;
          case Obligation::Inductive: current = &t.inductive_script; break;
          case Obligation::Post: current = &t.post_script; break;
        }
        if (!current->empty()) throw Error("template defines script '" + rest.front() + "' twice");
      } else {
        throw Error("template line " + std::to_string(lineno) + ": unknown directive '@" + d + "'");
      }
      continue;
    }
    if (current) {
      *current += line;
      *current += '\n';
    }
  }
  if (t.variables.empty()) throw Error("template has no ';; @vars' line");
  if (primed && primed->size() != t.variables.size()) throw Error("';; @primed' must name one symbol per variable");
  for (std::size_t i = 0; i < t.variables.size(); ++i) {
    t.primed[t.variables[i]] = primed ? (*primed)[i] : primed_name(t.variables[i]);
  }
  for (auto o : kObligations) {
    const auto& s = t.script(o);
    if (s.empty()) throw Error(std::string("template is missing the '") + to_string(o) + "' script");
    if (s.find(kInvPlaceholder) == std::string::npos) {
      throw Error(std::string("template script '") + to_string(o) + "' has no @INV@ placeholder");
    }
  }
  if (t.inductive_script.find(kInvPrimedPlaceholder) == std::string::npos) {
    throw Error("inductive template script has no @INV_PRIMED@ placeholder");
  }
  t.header = header_for(t.variables);
  return t;
}

std::string write_template_file(const SmtTemplate& tmpl) {
  std::ostringstream os;
  os << ";; @name " << tmpl.name << "\n;; @vars";
  for (const auto& v : tmpl.variables) os << ' ' << v;
  os << "\n;; @primed";
  for (const auto& v : tmpl.variables) os << ' ' << tmpl.primed.at(v);
  os << '\n';
  for (auto o : kObligations) os << ";; @script " << to_string(o) << '\n' << tmpl.script(o);
  return os.str();
}

}  // namespace invsynth
