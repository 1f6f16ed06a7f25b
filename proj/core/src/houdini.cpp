#include "invsynth/houdini.hpp"

#include "invsynth/errors.hpp"
#include "invsynth/smt_text.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <tuple>

namespace invsynth {

namespace {

enum class Rel { Le, Ge, Eq };

// sum(coeff * var) rel c, kept in a normal form so equivalent atoms compare equal.
struct LinearAtom {
  std::vector<std::pair<std::size_t, int>> terms;  // (variable index, +/-1), index ascending
  Rel rel;
  BigInt c;

  auto key() const { return std::tie(terms, rel, c); }
  bool operator<(const LinearAtom& o) const { return key() < o.key(); }
};

LinearAtom normalize(LinearAtom a) {
  std::sort(a.terms.begin(), a.terms.end());
  if (!a.terms.empty() && a.terms.front().second < 0) {
    for (auto& t : a.terms) t.second = -t.second;
    a.c = -a.c;
    if (a.rel == Rel::Le) a.rel = Rel::Ge;
    else if (a.rel == Rel::Ge) a.rel = Rel::Le;
  }
  return a;
}

Expr to_expr(const LinearAtom& a, const std::vector<std::string>& vars) {
  Expr lhs;
  bool first = true;
  for (auto [idx, coeff] : a.terms) {
    Expr v = Expr::var(vars[idx], Sort::Int);
    if (first) {
      lhs = coeff > 0 ? v : -v;
      first = false;
    } else {
      lhs = coeff > 0 ? lhs + v : lhs - v;
    }
  }
  Expr rhs = Expr::int_const(a.c);
  switch (a.rel) {
    case Rel::Le: return le(lhs, rhs);
    case Rel::Ge: return ge(lhs, rhs);
    case Rel::Eq: return eq(lhs, rhs);
  }
  return eq(lhs, rhs);
}

std::vector<BigInt> constant_pool(const std::vector<BigInt>& literals) {
  std::set<BigInt> cs{-1, 0, 1};
  for (const auto& l : literals) {
    cs.insert(l);
    cs.insert(l + 1);
    cs.insert(l - 1);
  }
  return {cs.begin(), cs.end()};
}

Env post_state_env(const SmtTemplate& tmpl, const Model& m) {
  Env env;
  for (const auto& v : tmpl.variables) {
    auto it = tmpl.primed.find(v);
    std::string name = it != tmpl.primed.end() ? it->second : primed_name(v);
    auto found = m.ints.find(name);
    env[v] = found != m.ints.end() ? found->second : BigInt(0);
  }
  return env;
}

Env pre_state_env(const SmtTemplate& tmpl, const Model& m) {
  Env env;
  for (const auto& v : tmpl.variables) {
    auto found = m.ints.find(v);
    env[v] = found != m.ints.end() ? found->second : BigInt(0);
  }
  return env;
}

}  // namespace

std::vector<Expr> houdini_atom_pool(const std::vector<std::string>& variables, const std::vector<BigInt>& literals) {
  auto cs = constant_pool(literals);
  std::set<LinearAtom> seen;
  std::vector<LinearAtom> ordered;
  auto add = [&](LinearAtom a) {
    a = normalize(std::move(a));
    if (seen.insert(a).second) ordered.push_back(std::move(a));
  };
  const Rel rels[] = {Rel::Le, Rel::Ge, Rel::Eq};
  for (std::size_t v = 0; v < variables.size(); ++v) {
    for (const auto& c : cs)
      for (Rel r : rels) add({{{v, 1}}, r, c});
  }
  for (std::size_t v = 0; v < variables.size(); ++v) {
    for (std::size_t w = 0; w < variables.size(); ++w) {
      if (v == w) continue;
      for (const auto& c : cs) {
        for (Rel r : rels) {
          add({{{v, 1}, {w, -1}}, r, c});  // v - w op c
          if (v < w) add({{{v, 1}, {w, 1}}, r, c});  // v + w op c
        }
        add({{{v, 1}, {w, -1}}, Rel::Eq, c});  // v = w + c
      }
    }
  }
  std::vector<Expr> out;
  out.reserve(ordered.size());
  for (const auto& a : ordered) out.push_back(to_expr(a, variables));
  return out;
}

HoudiniResult houdini_synthesize(const SmtTemplate& tmpl, const std::vector<BigInt>& literals,
                                 const SolverConfig& config, std::uint64_t seed) {
  HoudiniResult result;
  std::vector<Expr> pool = houdini_atom_pool(tmpl.variables, literals);
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);

  auto candidate = [&] { return Invariant::from_expr(and_of(pool)); };
  auto drop_false = [&](const Env& env) {
    auto before = pool.size();
    std::erase_if(pool, [&](const Expr& a) { return !evaluate_bool(a, env); });
    return before - pool.size();
  };
  auto fail = [&](std::string why) {
    result.surviving = pool;
    result.invariant = candidate();
    result.failure = std::move(why);
    return result;
  };

  while (true) {
    result.pool_sizes.push_back(pool.size());
    VcBundle bundle = splice(tmpl, candidate());

    auto init = check_script(bundle.init_script, config);
    ++result.solver_calls;
    if (auto* ce = std::get_if<Counterexample>(&init.verdict)) {
      if (drop_false(pre_state_env(tmpl, ce->model)) == 0) return fail("init counterexample refutes no atom");
      continue;
    }
    if (!is_valid(init.verdict)) return fail(std::string("init check: ") + verdict_name(init.verdict));

    auto ind = check_script(bundle.inductive_script, config);
    ++result.solver_calls;
    if (auto* ce = std::get_if<Counterexample>(&ind.verdict)) {
      if (drop_false(post_state_env(tmpl, ce->model)) == 0) return fail("inductive counterexample refutes no atom");
      continue;
    }
    if (!is_valid(ind.verdict)) return fail(std::string("inductive check: ") + verdict_name(ind.verdict));
    break;
  }

  result.surviving = pool;
  result.invariant = candidate();
  VcBundle bundle = splice(tmpl, result.invariant);
  auto post = check_script(bundle.post_script, config);
  ++result.solver_calls;
  if (is_valid(post.verdict)) {
    result.success = true;
  } else {
    result.failure = std::string("fixpoint does not imply the postcondition (post check: ") +
                     verdict_name(post.verdict) + ")";
  }
  return result;
}

HoudiniResult houdini_synthesize(const Program& program, const SmtTemplate& tmpl, const SolverConfig& config,
                                 std::uint64_t seed) {
  return houdini_synthesize(tmpl, program_literals(program), config, seed);
}

HoudiniProposer::HoudiniProposer(SolverConfig config, std::uint64_t seed) : config_(std::move(config)), seed_(seed) {}

Proposal HoudiniProposer::propose(const ProposalContext& ctx) {
  if (!ctx.tmpl) throw ProposerError("houdini proposer needs the problem template");
  auto start = std::chrono::steady_clock::now();
  if (ctx.attempt_index == 1 || last_.pool_sizes.empty()) {
    last_ = houdini_synthesize(*ctx.tmpl, ctx.literals, config_, seed_);
  }
  Proposal p;
  p.candidate = last_.invariant;
  p.raw_response = last_.invariant.smt_text;
  p.proposer_id = id();
  p.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return p;
}

}  // namespace invsynth
