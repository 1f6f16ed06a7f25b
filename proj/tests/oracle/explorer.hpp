#pragma once

// Brute-force reference semantics for Program, written against the AST
// only. Values are 64-bit; a state whose arithmetic overflows is dropped
// and the exploration is marked incomplete.

#include <invsynth/program.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using State = std::vector<std::int64_t>;  // indexed like Program::variables

struct ExploreOptions {
  std::int64_t init_lo = -5, init_hi = 5;      // initial value range of every variable
  std::int64_t nondet_lo = -5, nondet_hi = 5;  // values of unknown() and havoc
  int max_iterations = 100;
  std::size_t state_cap = 200000;
};

struct Exploration {
  std::set<State> loop_head;  // states reaching the loop head
  std::set<State> exits;      // loop-head states where the guard can be false
  bool truncated = false;     // state cap, iteration cap or overflow hit
};

Exploration explore(const invsynth::Program& program, const ExploreOptions& options = {});

/// True when some nondeterministic choice makes `cond` true in `s`.
/// Arithmetic overflow counts as false.
bool holds(const invsynth::Program& program, const invsynth::Expr& cond, const State& s);

/// `x=1 y=-2` style rendering for diagnostics.
std::string render_state(const std::vector<std::string>& vars, const State& s);

}  // namespace oracle
