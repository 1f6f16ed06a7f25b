#pragma once

#include "invsynth/proposer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace invsynth {

/// Candidate conjuncts over the program variables: v op c, v - w op c,
/// v + w op c and v = w + c, for op in {<=, >=, =} and c drawn from the
/// literals, {-1, 0, 1}, and each literal +/- 1. Duplicates are removed.
std::vector<Expr> houdini_atom_pool(const std::vector<std::string>& variables, const std::vector<BigInt>& literals);

struct HoudiniResult {
  bool success = false;
  Invariant invariant;                // conjunction of the survivors
  std::vector<Expr> surviving;
  std::vector<std::size_t> pool_sizes;  // pool size before each round
  int solver_calls = 0;
  std::string failure;  // empty on success
};

/// Drops atoms refuted by init counterexamples (pre-state values) and
/// inductiveness counterexamples (post-state values) until both checks
/// pass, then runs the post check. `seed` only permutes the pool; the
/// fixpoint does not depend on it.
HoudiniResult houdini_synthesize(const SmtTemplate& tmpl, const std::vector<BigInt>& literals,
                                 const SolverConfig& config, std::uint64_t seed = 0);
HoudiniResult houdini_synthesize(const Program& program, const SmtTemplate& tmpl, const SolverConfig& config,
                                 std::uint64_t seed = 0);

/// Runs the fixpoint once per problem and proposes its result. Later
/// attempts repeat the same candidate.
class HoudiniProposer : public Proposer {
 public:
  HoudiniProposer(SolverConfig config, std::uint64_t seed = 0);

  std::string id() const override { return "houdini"; }
  Proposal propose(const ProposalContext& ctx) override;

  /// The fixpoint of the most recent attempt-1 call.
  const HoudiniResult& last_result() const { return last_; }

 private:
  SolverConfig config_;
  std::uint64_t seed_;
  HoudiniResult last_;
};

}  // namespace invsynth
