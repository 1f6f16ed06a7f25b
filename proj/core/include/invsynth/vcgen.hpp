#pragma once

#include "invsynth/program.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace invsynth {

inline constexpr std::string_view kInvPlaceholder = "@INV@";
inline constexpr std::string_view kInvPrimedPlaceholder = "@INV_PRIMED@";

/// Post-state symbol for a program variable. C identifiers cannot contain
/// '.', so the result never collides with a program variable.
std::string primed_name(std::string_view var);

struct AuxVar {
  std::string name;
  Sort sort = Sort::Int;

  friend bool operator==(const AuxVar&, const AuxVar&) = default;
};

/// One execution of the loop body as a formula over x, x.post and fresh
/// auxiliaries (havocs, nondeterministic choices).
struct TransitionRelation {
  std::vector<std::string> pre_state_vars;
  std::vector<std::string> post_state_vars;
  std::vector<AuxVar> aux_vars;
  Expr formula;
};

/// A candidate invariant. `formula` is present only when `smt_text` is a
/// well-sorted term we can read; malformed text is still a valid candidate
/// and is passed to the solver unchanged.
struct Invariant {
  std::string smt_text;
  std::optional<Expr> formula;

  static Invariant from_text(std::string text, const SortMap& sorts);
  static Invariant from_expr(const Expr& e);
};

enum class Obligation { Init, Inductive, Post };
inline constexpr Obligation kObligations[] = {Obligation::Init, Obligation::Inductive, Obligation::Post};
const char* to_string(Obligation o) noexcept;
Obligation obligation_from_string(std::string_view s);

/// Three checks with `@INV@` (and `@INV_PRIMED@` in the inductive script)
/// where the candidate is spliced in.
struct SmtTemplate {
  std::string name;
  std::string header;  // logic, options and program-variable declarations
  std::string init_script;
  std::string inductive_script;
  std::string post_script;
  std::vector<std::string> variables;
  std::map<std::string, std::string> primed;  // program var -> post-state symbol

  const std::string& script(Obligation o) const;
  SortMap sorts() const;
};

struct VcBundle {
  std::string init_script;
  std::string inductive_script;
  std::string post_script;
  Invariant candidate;

  const std::string& script(Obligation o) const;
};

/// P: the explicit precondition constraining the initial state, followed
/// by the strongest postcondition of the prefix. Auxiliary variables are
/// eliminated by substitution where possible; havocked variables end up
/// unconstrained.
Expr derive_precondition(const Program& program);

/// Auxiliary variables (with sorts) that `derive_precondition` leaves in P.
std::vector<AuxVar> precondition_aux(const Program& program, const Expr& precondition);

TransitionRelation encode_body(const Block& body, const std::vector<std::string>& vars);

SmtTemplate make_template(const Program& program);

VcBundle splice(const SmtTemplate& tmpl, const Invariant& candidate);

/// Priming by whole-symbol substitution.
std::string prime_candidate(const SmtTemplate& tmpl, std::string_view candidate_text);

/// `.smt2t` file: `;; @vars`, optional `;; @primed`, and three
/// `;; @script <init|inductive|post>` sections.
SmtTemplate parse_template_file(std::string_view text, std::string name);
std::string write_template_file(const SmtTemplate& tmpl);

}  // namespace invsynth
